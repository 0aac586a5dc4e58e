#include "phm/rbd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "phm/format.hpp"
#include "quadrature.hpp"

namespace phm::rbd {

bool Group::operator==(const Group& other) const {
  return kind == other.kind && children == other.children;
}

BlockExpr BlockExpr::leaf(std::string component_id, LifeModel model, int quantity) {
  return BlockExpr(Leaf{std::move(component_id), quantity, model});
}

BlockExpr BlockExpr::series(std::vector<BlockExpr> children) {
  return BlockExpr(Group{GroupKind::kSeries, std::move(children)});
}

BlockExpr BlockExpr::parallel(std::vector<BlockExpr> children) {
  return BlockExpr(Group{GroupKind::kParallel, std::move(children)});
}

void BlockExpr::for_each_leaf(const std::function<void(const Leaf&)>& fn) const {
  if (is_leaf()) {
    fn(as_leaf());
    return;
  }
  for (const auto& child : as_group().children) child.for_each_leaf(fn);
}

std::size_t BlockExpr::leaf_count() const {
  std::size_t n = 0;
  for_each_leaf([&n](const Leaf&) { ++n; });
  return n;
}

namespace {

void validate_node(const BlockExpr& expr, const std::string& path,
                   const std::function<bool(std::string_view)>& resolves,
                   std::vector<Diagnostic>& out) {
  if (expr.is_leaf()) {
    const auto& leaf = expr.as_leaf();
    if (leaf.quantity < 1) out.push_back({path, "quantity must be a positive integer"});
    if (resolves && !resolves(leaf.component_id)) {
      out.push_back({path, "unresolved reference '" + leaf.component_id + "'"});
    }
    return;
  }
  const auto& group = expr.as_group();
  if (group.children.empty()) {
    out.push_back({path, std::string("empty group (") +
                             (group.kind == GroupKind::kSeries ? "series" : "parallel") +
                             " needs at least one child)"});
  }
  for (std::size_t i = 0; i < group.children.size(); ++i) {
    validate_node(group.children[i], path + ".children[" + std::to_string(i) + "]", resolves,
                  out);
  }
}

void require_valid(const BlockExpr& expr) {
  auto problems = validate_block(expr);
  if (!problems.empty()) throw ValidationError(std::move(problems));
}

void require_time(double t) {
  if (!std::isfinite(t) || t < 0.0) {
    throw DomainError("time must be finite and non-negative, got " + format_number(t));
  }
}

// ln R and h = -d(ln R)/dt for one node.
struct State {
  double log_r;
  double hazard;
};

constexpr double kLn2 = 0.69314718055994531;

// ln(1 - e^x) for x <= 0, accurate at both ends.
double log1m_exp(double x) {
  return x < -kLn2 ? std::log1p(-std::exp(x)) : std::log(-std::expm1(x));
}

State evaluate(const BlockExpr& expr, double t) {
  if (expr.is_leaf()) {
    const auto& leaf = expr.as_leaf();
    const double q = leaf.quantity;
    return {q * log_reliability(leaf.model, t), q * eval_life(leaf.model, t).hazard};
  }
  const auto& group = expr.as_group();
  if (group.kind == GroupKind::kSeries) {
    State s{0.0, 0.0};
    for (const auto& child : group.children) {
      State c = evaluate(child, t);
      s.log_r += c.log_r;
      s.hazard += c.hazard;
    }
    return s;
  }
  // Parallel, in logs: ln F = sum ln F_i, dF/dt = sum_i f_i prod_{j != i} F_j.
  const std::size_t n = group.children.size();
  std::vector<State> kids;
  kids.reserve(n);
  for (const auto& child : group.children) kids.push_back(evaluate(child, t));
  std::vector<double> prefix(n + 1, 0.0), suffix(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + log1m_exp(kids[i].log_r);
  for (std::size_t i = n; i-- > 0;) suffix[i] = suffix[i + 1] + log1m_exp(kids[i].log_r);
  const double log_r = log1m_exp(prefix[n]);
  double hazard = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double log_others = prefix[i] + suffix[i + 1];
    // At t = 0 every F_j is 0 and a child hazard may be +inf; the term's
    // limit is taken as 0 whenever the other children contribute a zero.
    if (log_others == -std::numeric_limits<double>::infinity()) continue;
    hazard += kids[i].hazard * std::exp(kids[i].log_r + log_others - log_r);
  }
  return {log_r, hazard};
}

double leaf_time_scale(const Leaf& leaf) {
  const double q = leaf.quantity;
  if (leaf.model.is_exponential()) return 1.0 / (q * leaf.model.rate_per_hour());
  const auto& w = std::get<Weibull>(leaf.model.law());
  return w.alpha * std::pow(q, -1.0 / w.beta);
}

std::uint64_t splitmix(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double sample_lifetime(const BlockExpr& expr, std::mt19937_64& rng) {
  if (expr.is_leaf()) {
    const auto& leaf = expr.as_leaf();
    double shortest = std::numeric_limits<double>::infinity();
    for (int i = 0; i < leaf.quantity; ++i) {
      // Open interval (0, 1): 53 random bits offset by half an ulp.
      const double u = (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
      shortest = std::min(shortest, inverse_reliability(leaf.model, u));
    }
    return shortest;
  }
  const auto& group = expr.as_group();
  const bool series = group.kind == GroupKind::kSeries;
  double life = series ? std::numeric_limits<double>::infinity() : 0.0;
  for (const auto& child : group.children) {
    const double c = sample_lifetime(child, rng);
    life = series ? std::min(life, c) : std::max(life, c);
  }
  return life;
}

}  // namespace

std::vector<Diagnostic> validate_block(const BlockExpr& expr,
                                       const std::function<bool(std::string_view)>& resolves) {
  std::vector<Diagnostic> out;
  validate_node(expr, "$", resolves, out);
  return out;
}

double system_reliability(const BlockExpr& expr, double t) {
  return std::exp(system_log_reliability(expr, t));
}

double system_log_reliability(const BlockExpr& expr, double t) {
  require_valid(expr);
  require_time(t);
  return evaluate(expr, t).log_r;
}

std::optional<double> series_exponential_rate(const BlockExpr& expr) {
  if (expr.is_leaf()) {
    const auto& leaf = expr.as_leaf();
    if (!leaf.model.is_exponential()) return std::nullopt;
    return leaf.quantity * leaf.model.rate_per_hour();
  }
  const auto& group = expr.as_group();
  if (group.kind != GroupKind::kSeries && group.children.size() != 1) return std::nullopt;
  double total = 0.0;
  for (const auto& child : group.children) {
    auto rate = series_exponential_rate(child);
    if (!rate) return std::nullopt;
    total += *rate;
  }
  return total;
}

double system_hazard(const BlockExpr& expr, double t) {
  require_valid(expr);
  require_time(t);
  if (auto rate = series_exponential_rate(expr)) {
    if (-*rate * t <= std::log(kFailedReliability)) {
      throw SystemFailedError("system effectively failed at t = " + format_number(t));
    }
    return *rate;
  }
  const State s = evaluate(expr, t);
  if (s.log_r <= std::log(kFailedReliability)) {
    throw SystemFailedError("system effectively failed at t = " + format_number(t));
  }
  return s.hazard;
}

double system_mttf(const BlockExpr& expr) {
  require_valid(expr);
  if (auto rate = series_exponential_rate(expr)) return 1.0 / *rate;

  double scale = std::numeric_limits<double>::infinity();
  expr.for_each_leaf([&scale](const Leaf& leaf) { scale = std::min(scale, leaf_time_scale(leaf)); });

  auto reliability = [&expr](double t) { return std::exp(evaluate(expr, t).log_r); };
  constexpr int kPanelBudget = 200000;
  constexpr int kMaxPanels = 400;
  double total = 0.0;
  double a = 0.0;
  double b = scale;
  int spent = 0;
  for (int panel = 0; panel < kMaxPanels; ++panel) {
    const auto r = detail::integrate_gk15(reliability, a, b, 1e-11, 1e-14 * scale,
                                          kPanelBudget - spent);
    spent += r.evaluations;
    total += r.value;
    if (!r.converged || spent >= kPanelBudget) {
      throw NumericError("MTTF quadrature budget exceeded", total);
    }
    if (evaluate(expr, b).log_r < std::log(kFailedReliability)) return total;
    a = b;
    b *= 2.0;
  }
  throw NumericError("MTTF quadrature did not reach the reliability floor", total);
}

std::map<std::string, double> failure_attribution(
    const std::map<std::string, std::uint64_t>& counts) {
  const std::uint64_t total = std::accumulate(
      counts.begin(), counts.end(), std::uint64_t{0},
      [](std::uint64_t acc, const auto& kv) { return acc + kv.second; });
  if (total == 0) throw DomainError("failure attribution needs at least one failure");
  std::map<std::string, double> out;
  for (const auto& [type, count] : counts) {
    out[type] = static_cast<double>(count) / static_cast<double>(total);
  }
  return out;
}

MonteCarloEstimate mc_reliability_oracle(const BlockExpr& expr, double t,
                                         std::uint64_t samples, std::uint64_t seed) {
  require_valid(expr);
  require_time(t);
  if (samples < 1000) throw DomainError("Monte Carlo oracle needs at least 1000 samples");
  std::uint64_t mix = seed;
  std::mt19937_64 rng(splitmix(mix));
  std::uint64_t survived = 0;
  for (std::uint64_t i = 0; i < samples; ++i) {
    if (sample_lifetime(expr, rng) > t) ++survived;
  }
  const double n = static_cast<double>(samples);
  const double p = static_cast<double>(survived) / n;
  return {p, std::sqrt(p * (1.0 - p) / n)};
}

}  // namespace phm::rbd
