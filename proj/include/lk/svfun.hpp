// Slowly varying functions built from powers of iterated base-2 logarithms,
// their (0,1]-side weights V(t) = v(1/t), and numerical monotonicity audits
// for the SV / SVL classes.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace lk {

/// l_1(t) = 1 + log2 t, l_i(t) = 1 + log2 l_{i-1}(t), defined for t >= 1.
/// Every iterate is >= 1 there, so the recursion never leaves the domain.
inline double iterated_log(int level, double t) {
  double x = t;
  for (int i = 0; i < level; ++i) x = 1.0 + std::log2(x);
  return x;
}

struct SVFactor {
  int level = 1;         // i in l_i
  double exponent = 0.0; // lambda_i
  friend bool operator==(const SVFactor&, const SVFactor&) = default;
};

/// v(t) = scale * prod_i l_i(t)^{lambda_i} on [1, inf).
///
/// The representation is canonical: factors sorted by level, one entry per
/// level, zero exponents removed. The family is closed under product and
/// quotient, which keeps quotients like v2/v1 inside the class by
/// construction.
class SVFunction {
 public:
  SVFunction() = default; // v == 1

  static SVFunction constant(double c) {
    if (!(c > 0.0)) throw std::invalid_argument("SVFunction: scale must be positive");
    SVFunction v;
    v.scale_ = c;
    return v;
  }

  static SVFunction log_power(int level, double exponent) {
    if (level < 1) throw std::invalid_argument("SVFunction: log level must be >= 1");
    SVFunction v;
    v.factors_.push_back({level, exponent});
    v.canonicalize();
    return v;
  }

  /// Parses "2.0 * l1^0.5 * l2^-1". Factors are joined by '*'; a factor is
  /// either a decimal scale or l<i> with an optional ^exponent. "1" is the
  /// constant function.
  static SVFunction parse(std::string_view text);

  /// Evaluates v(t); throws std::domain_error for t < 1.
  double operator()(double t) const {
    if (!(t >= 1.0)) throw std::domain_error("SVFunction: argument must satisfy t >= 1");
    double out = scale_;
    for (const auto& f : factors_) out *= std::pow(iterated_log(f.level, t), f.exponent);
    return out;
  }

  SVFunction times(const SVFunction& other) const {
    SVFunction out = *this;
    out.scale_ *= other.scale_;
    out.factors_.insert(out.factors_.end(), other.factors_.begin(), other.factors_.end());
    out.canonicalize();
    return out;
  }

  /// Quotient a/b: exponents subtract levelwise, scales divide.
  SVFunction over(const SVFunction& other) const {
    SVFunction out = *this;
    out.scale_ /= other.scale_;
    for (const auto& f : other.factors_) out.factors_.push_back({f.level, -f.exponent});
    out.canonicalize();
    return out;
  }

  const std::vector<SVFactor>& factors() const { return factors_; }
  double scale() const { return scale_; }
  bool is_constant() const { return factors_.empty(); }

  std::string str() const {
    std::ostringstream os;
    os.precision(12);
    bool first = false;
    if (factors_.empty() || scale_ != 1.0) {
      os << scale_;
      first = true;
    }
    for (const auto& f : factors_) {
      if (first) os << " * ";
      os << 'l' << f.level;
      if (f.exponent != 1.0) os << '^' << f.exponent;
      first = true;
    }
    return os.str();
  }

  friend bool operator==(const SVFunction&, const SVFunction&) = default;

 private:
  void canonicalize() {
    std::sort(factors_.begin(), factors_.end(),
              [](const SVFactor& a, const SVFactor& b) { return a.level < b.level; });
    std::vector<SVFactor> merged;
    for (const auto& f : factors_) {
      if (!merged.empty() && merged.back().level == f.level)
        merged.back().exponent += f.exponent;
      else
        merged.push_back(f);
    }
    std::erase_if(merged, [](const SVFactor& f) { return f.exponent == 0.0; });
    factors_ = std::move(merged);
  }

  std::vector<SVFactor> factors_;
  double scale_ = 1.0;
};

inline SVFunction SVFunction::parse(std::string_view text) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
  };
  SVFunction v;
  std::string_view rest = trim(text);
  if (rest.empty()) throw std::invalid_argument("SVFunction: empty expression");
  while (!rest.empty()) {
    std::string_view tok;
    auto star = rest.find('*');
    if (star == std::string_view::npos) {
      tok = trim(rest);
      rest = {};
    } else {
      tok = trim(rest.substr(0, star));
      rest = trim(rest.substr(star + 1));
      if (rest.empty()) throw std::invalid_argument("SVFunction: trailing '*'");
    }
    if (tok.empty()) throw std::invalid_argument("SVFunction: empty factor");
    if (tok.front() == 'l') {
      auto caret = tok.find('^');
      std::string level_digits(tok.substr(1, caret == std::string_view::npos
                                                 ? std::string_view::npos
                                                 : caret - 1));
      std::size_t used = 0;
      int level = 0;
      try {
        level = std::stoi(level_digits, &used);
      } catch (const std::exception&) {
        throw std::invalid_argument("SVFunction: bad log level in '" + std::string(tok) + "'");
      }
      if (used != level_digits.size() || level < 1)
        throw std::invalid_argument("SVFunction: bad log level in '" + std::string(tok) + "'");
      double expo = 1.0;
      if (caret != std::string_view::npos) {
        std::string expo_digits(tok.substr(caret + 1));
        try {
          expo = std::stod(expo_digits, &used);
        } catch (const std::exception&) {
          throw std::invalid_argument("SVFunction: bad exponent in '" + std::string(tok) + "'");
        }
        if (used != expo_digits.size())
          throw std::invalid_argument("SVFunction: bad exponent in '" + std::string(tok) + "'");
      }
      v.factors_.push_back({level, expo});
    } else {
      std::size_t used = 0;
      double c = 0.0;
      try {
        c = std::stod(std::string(tok), &used);
      } catch (const std::exception&) {
        throw std::invalid_argument("SVFunction: bad factor '" + std::string(tok) + "'");
      }
      if (used != tok.size())
        throw std::invalid_argument("SVFunction: bad factor '" + std::string(tok) + "'");
      if (!(c > 0.0)) throw std::invalid_argument("SVFunction: scale must be positive");
      v.scale_ *= c;
    }
  }
  v.canonicalize();
  return v;
}

/// Weight V(t) = v(1/t) on (0,1]. Evaluating at t = 2^-k uses the exact
/// reciprocal 2^k, so weight_eval(V, 2^-k) == sv_eval(v, 2^k) bitwise.
class WeightV {
 public:
  WeightV() = default; // V == 1
  explicit WeightV(SVFunction base) : base_(std::move(base)) {}

  double operator()(double t) const {
    if (!(t > 0.0) || t > 1.0) throw std::domain_error("WeightV: argument must lie in (0,1]");
    return base_(1.0 / t);
  }

  /// V(2^-s) for integer s >= 0.
  double at_dyadic(int s) const {
    if (s < 0) throw std::domain_error("WeightV: dyadic level must be >= 0");
    return base_(std::ldexp(1.0, s));
  }

  const SVFunction& base() const { return base_; }

 private:
  SVFunction base_;
};

inline constexpr double kDefaultSlack = 1.05;

/// Audit grid 2^0, 2^1, ..., 2^kmax.
inline std::vector<double> dyadic_grid(int kmax) {
  std::vector<double> g;
  g.reserve(static_cast<std::size_t>(kmax) + 1);
  for (int k = 0; k <= kmax; ++k) g.push_back(std::ldexp(1.0, k));
  return g;
}

/// Result of a single eventual-monotonicity scan. "Equivalent to a monotone
/// function" is audited as tail equivalence: from some index k0 on, the
/// sequence never strays from its running extreme by more than the slack
/// factor, and the certified tail must cover at least half the grid so a
/// slow power-law drift cannot hide behind the slack.
struct MonotoneAudit {
  bool eventually = false;
  std::size_t k0 = 0;           // start of the certified tail (y.size() if none)
  double worst_violation = 1.0; // max factor by which the whole grid violates
};

namespace detail {

enum class Direction { NonDecreasing, NonIncreasing };

inline bool tail_holds(const std::vector<double>& y, std::size_t k0, Direction dir,
                       double slack) {
  double extreme = y[k0];
  for (std::size_t i = k0 + 1; i < y.size(); ++i) {
    if (dir == Direction::NonDecreasing) {
      extreme = std::max(extreme, y[i]);
      if (y[i] * slack < extreme) return false;
    } else {
      extreme = std::min(extreme, y[i]);
      if (y[i] > extreme * slack) return false;
    }
  }
  return true;
}

inline MonotoneAudit audit_monotone(const std::vector<double>& y, Direction dir, double slack) {
  MonotoneAudit a;
  if (y.size() < 2) {
    a.eventually = true;
    a.k0 = 0;
    return a;
  }
  double extreme = y[0];
  for (std::size_t i = 1; i < y.size(); ++i) {
    if (dir == Direction::NonDecreasing) {
      extreme = std::max(extreme, y[i]);
      a.worst_violation = std::max(a.worst_violation, extreme / y[i]);
    } else {
      extreme = std::min(extreme, y[i]);
      a.worst_violation = std::max(a.worst_violation, y[i] / extreme);
    }
  }
  const std::size_t half = (y.size() - 1) / 2;
  a.k0 = y.size();
  for (std::size_t k0 = 0; k0 <= half; ++k0) {
    if (tail_holds(y, k0, dir, slack)) {
      a.k0 = k0;
      break;
    }
  }
  a.eventually = a.k0 < y.size();
  return a;
}

} // namespace detail

/// Outcome of an SV / SVL class audit. The slack convention is a numerical
/// surrogate for the definition's "equivalent to monotone"; reports carry it
/// explicitly so downstream CSV echoes the convention used.
struct ClassReport {
  bool pass = false;
  bool svl_checked = false;
  double epsilon = 0.0;
  double slack = kDefaultSlack;
  MonotoneAudit up;     // t^{+eps} v(t) eventually non-decreasing
  MonotoneAudit down;   // t^{-eps} v(t) eventually non-increasing
  MonotoneAudit log_up; // (log2 2t)^eps v(t) eventually non-decreasing (SVL)
  std::string note;
};

namespace detail {

inline void require_grid(const std::vector<double>& tgrid, double eps) {
  if (tgrid.empty()) throw std::invalid_argument("class check: empty audit grid");
  if (!(eps > 0.0)) throw std::invalid_argument("class check: epsilon must be positive");
  if (!(tgrid.front() >= 1.0))
    throw std::invalid_argument("class check: grid must start at t >= 1");
  for (std::size_t i = 0; i + 1 < tgrid.size(); ++i)
    if (!(tgrid[i] < tgrid[i + 1]))
      throw std::invalid_argument("class check: grid must be strictly increasing");
}

} // namespace detail

/// Checks the SV[1,inf) membership surrogate on an audit grid: t^{eps} v(t)
/// eventually non-decreasing and t^{-eps} v(t) eventually non-increasing,
/// both up to the slack factor.
inline ClassReport check_sv_class(const SVFunction& v, double eps,
                                  const std::vector<double>& tgrid,
                                  double slack = kDefaultSlack) {
  detail::require_grid(tgrid, eps);
  ClassReport rep;
  rep.epsilon = eps;
  rep.slack = slack;
  std::vector<double> up(tgrid.size()), down(tgrid.size());
  for (std::size_t i = 0; i < tgrid.size(); ++i) {
    const double vt = v(tgrid[i]);
    up[i] = std::pow(tgrid[i], eps) * vt;
    down[i] = std::pow(tgrid[i], -eps) * vt;
  }
  rep.up = detail::audit_monotone(up, detail::Direction::NonDecreasing, slack);
  rep.down = detail::audit_monotone(down, detail::Direction::NonIncreasing, slack);
  rep.pass = rep.up.eventually && rep.down.eventually;
  rep.note = "monotone-equivalence audited as eventual pairwise monotonicity with slack";
  return rep;
}

/// SVL[1,inf) surrogate: the SV audit plus (log2 2t)^{eps} v(t) eventually
/// non-decreasing.
inline ClassReport check_svl_class(const SVFunction& v, double eps,
                                   const std::vector<double>& tgrid,
                                   double slack = kDefaultSlack) {
  ClassReport rep = check_sv_class(v, eps, tgrid, slack);
  rep.svl_checked = true;
  std::vector<double> logup(tgrid.size());
  for (std::size_t i = 0; i < tgrid.size(); ++i)
    logup[i] = std::pow(std::log2(2.0 * tgrid[i]), eps) * v(tgrid[i]);
  rep.log_up = detail::audit_monotone(logup, detail::Direction::NonDecreasing, slack);
  rep.pass = rep.pass && rep.log_up.eventually;
  return rep;
}

} // namespace lk
