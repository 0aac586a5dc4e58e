#pragma once

// Internal helpers shared by the document readers and writers.

#include <map>
#include <string>
#include <string_view>

#include "json.hpp"

namespace phm::detail {

using Json = nlohmann::ordered_json;

/// Emits `doc` with 2-space indentation. Integers print as integers, every
/// other number in shortest round-trip scientific notation, arrays of
/// scalars on one line. Output ends with a newline.
std::string dump_canonical(const Json& doc);

/// Single-line form of the same rules, for line-delimited records.
std::string dump_compact(const Json& doc);

/// Parsed document plus a JSON-pointer -> line map for error reporting.
class Document {
 public:
  explicit Document(std::string_view text);

  const Json& root() const { return root_; }
  int line_of(const std::string& pointer) const;
  [[noreturn]] void fail(const std::string& pointer, const std::string& message) const;

 private:
  Json root_;
  std::map<std::string, int> lines_;
};

/// Strict view over one JSON object: typed accessors and a final check that
/// no unrecognized key is present.
class ObjectReader {
 public:
  ObjectReader(const Document& doc, const Json& value, std::string pointer);

  bool has(const std::string& key) const;
  const Json& get(const std::string& key);
  const Json* find(const std::string& key);

  std::string string(const std::string& key);
  std::string string_or(const std::string& key, std::string fallback);
  double number(const std::string& key);
  double number_or(const std::string& key, double fallback);
  long long integer(const std::string& key);
  long long integer_or(const std::string& key, long long fallback);

  std::string child(const std::string& key) const { return pointer_ + "/" + escape(key); }
  const std::string& pointer() const { return pointer_; }
  const Document& doc() const { return doc_; }

  /// Fails on the first key never touched by an accessor.
  void finish() const;

  [[noreturn]] void fail(const std::string& key, const std::string& message) const;

  static std::string escape(const std::string& key);

 private:
  const Document& doc_;
  const Json& value_;
  std::string pointer_;
  std::map<std::string, bool> seen_;
};

std::string type_name(const Json& value);
double as_number(const Document& doc, const Json& value, const std::string& pointer);

}  // namespace phm::detail
