#include "json_io.hpp"

#include <cmath>
#include <vector>

#include "phm/error.hpp"
#include "phm/format.hpp"

namespace phm::detail {

namespace {

bool is_scalar(const Json& v) { return !v.is_object() && !v.is_array(); }

std::string scalar_text(const Json& v) {
  if (v.is_number_float()) return format_shortest(v.get<double>());
  return v.dump();
}

void emit(const Json& v, int depth, std::string& out) {
  const std::string pad(2 * (depth + 1), ' ');
  const std::string close_pad(2 * depth, ' ');
  if (v.is_object()) {
    if (v.empty()) {
      out += "{}";
      return;
    }
    out += "{\n";
    bool first = true;
    for (const auto& [key, child] : v.items()) {
      if (!first) out += ",\n";
      first = false;
      out += pad + Json(key).dump() + ": ";
      emit(child, depth + 1, out);
    }
    out += "\n" + close_pad + "}";
  } else if (v.is_array()) {
    if (v.empty()) {
      out += "[]";
      return;
    }
    bool flat = true;
    for (const auto& child : v) flat = flat && is_scalar(child);
    if (flat) {
      out += "[";
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ", ";
        out += scalar_text(v[i]);
      }
      out += "]";
      return;
    }
    out += "[\n";
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) out += ",\n";
      out += pad;
      emit(v[i], depth + 1, out);
    }
    out += "\n" + close_pad + "]";
  } else {
    out += scalar_text(v);
  }
}

void emit_compact(const Json& v, std::string& out) {
  if (v.is_object()) {
    out += "{";
    bool first = true;
    for (const auto& [key, child] : v.items()) {
      if (!first) out += ",";
      first = false;
      out += Json(key).dump() + ":";
      emit_compact(child, out);
    }
    out += "}";
  } else if (v.is_array()) {
    out += "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) out += ",";
      emit_compact(v[i], out);
    }
    out += "]";
  } else {
    out += scalar_text(v);
  }
}

// Walks syntactically valid JSON and records the line each value starts on.
class LineScanner {
 public:
  LineScanner(std::string_view text, std::map<std::string, int>& lines)
      : text_(text), lines_(lines) {}

  void run() { value(""); }

 private:
  void skip_ws() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '\n') {
        ++line_;
      } else if (c != ' ' && c != '\t' && c != '\r') {
        break;
      }
      ++pos_;
    }
  }

  std::string string_token() {
    const std::size_t start = pos_++;
    while (pos_ < text_.size() && text_[pos_] != '"') {
      if (text_[pos_] == '\\') ++pos_;
      ++pos_;
    }
    ++pos_;
    return Json::parse(text_.substr(start, pos_ - start)).get<std::string>();
  }

  void value(const std::string& pointer) {
    skip_ws();
    if (pos_ >= text_.size()) return;
    lines_[pointer] = line_;
    const char c = text_[pos_];
    if (c == '{') {
      ++pos_;
      skip_ws();
      if (text_[pos_] == '}') {
        ++pos_;
        return;
      }
      while (true) {
        skip_ws();
        const std::string key = string_token();
        skip_ws();
        ++pos_;  // ':'
        value(pointer + "/" + ObjectReader::escape(key));
        skip_ws();
        if (text_[pos_++] == '}') return;
      }
    }
    if (c == '[') {
      ++pos_;
      skip_ws();
      if (text_[pos_] == ']') {
        ++pos_;
        return;
      }
      for (int i = 0;; ++i) {
        value(pointer + "/" + std::to_string(i));
        skip_ws();
        if (text_[pos_++] == ']') return;
      }
    }
    if (c == '"') {
      string_token();
      return;
    }
    while (pos_ < text_.size() && std::string_view(",]} \t\r\n").find(text_[pos_]) ==
                                      std::string_view::npos) {
      ++pos_;
    }
  }

  std::string_view text_;
  std::map<std::string, int>& lines_;
  std::size_t pos_ = 0;
  int line_ = 1;
};

int line_at(std::string_view text, std::size_t byte) {
  int line = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') ++line;
  }
  return line;
}

}  // namespace

std::string dump_canonical(const Json& doc) {
  std::string out;
  emit(doc, 0, out);
  out += "\n";
  return out;
}

std::string dump_compact(const Json& doc) {
  std::string out;
  emit_compact(doc, out);
  return out;
}

Document::Document(std::string_view text) {
  try {
    root_ = Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    const std::size_t byte = e.byte > 0 ? e.byte - 1 : 0;
    throw SchemaError("", line_at(text, byte), std::string("syntax error: ") + e.what());
  }
  LineScanner(text, lines_).run();
}

int Document::line_of(const std::string& pointer) const {
  // Fall back to the nearest enclosing value for absent keys.
  std::string p = pointer;
  while (true) {
    auto it = lines_.find(p);
    if (it != lines_.end()) return it->second;
    if (p.empty()) return 1;
    p.erase(p.rfind('/'));
  }
}

void Document::fail(const std::string& pointer, const std::string& message) const {
  throw SchemaError(pointer, line_of(pointer), message);
}

ObjectReader::ObjectReader(const Document& doc, const Json& value, std::string pointer)
    : doc_(doc), value_(value), pointer_(std::move(pointer)) {
  if (!value_.is_object()) doc_.fail(pointer_, "expected an object, found " + type_name(value_));
}

bool ObjectReader::has(const std::string& key) const { return value_.contains(key); }

const Json& ObjectReader::get(const std::string& key) {
  if (!value_.contains(key)) doc_.fail(pointer_, "missing required field '" + key + "'");
  seen_[key] = true;
  return value_.at(key);
}

const Json* ObjectReader::find(const std::string& key) {
  if (!value_.contains(key)) return nullptr;
  seen_[key] = true;
  return &value_.at(key);
}

std::string ObjectReader::string(const std::string& key) {
  const Json& v = get(key);
  if (!v.is_string()) fail(key, "expected a string, found " + type_name(v));
  return v.get<std::string>();
}

std::string ObjectReader::string_or(const std::string& key, std::string fallback) {
  return has(key) ? string(key) : std::move(fallback);
}

double ObjectReader::number(const std::string& key) {
  return as_number(doc_, get(key), child(key));
}

double ObjectReader::number_or(const std::string& key, double fallback) {
  return has(key) ? number(key) : fallback;
}

long long ObjectReader::integer(const std::string& key) {
  const Json& v = get(key);
  if (!v.is_number_integer()) fail(key, "expected an integer, found " + type_name(v));
  return v.get<long long>();
}

long long ObjectReader::integer_or(const std::string& key, long long fallback) {
  return has(key) ? integer(key) : fallback;
}

void ObjectReader::finish() const {
  for (const auto& [key, unused] : value_.items()) {
    if (!seen_.count(key)) fail(key, "unrecognized field '" + key + "'");
  }
}

void ObjectReader::fail(const std::string& key, const std::string& message) const {
  doc_.fail(child(key), message);
}

std::string ObjectReader::escape(const std::string& key) {
  std::string out;
  for (char c : key) {
    if (c == '~') {
      out += "~0";
    } else if (c == '/') {
      out += "~1";
    } else {
      out += c;
    }
  }
  return out;
}

std::string type_name(const Json& value) {
  if (value.is_number()) return "number";
  return value.type_name();
}

double as_number(const Document& doc, const Json& value, const std::string& pointer) {
  if (!value.is_number()) doc.fail(pointer, "expected a number, found " + type_name(value));
  const double d = value.get<double>();
  if (!std::isfinite(d)) doc.fail(pointer, "number must be finite");
  return d;
}

}  // namespace phm::detail
