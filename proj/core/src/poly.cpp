#include "acsos/poly.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"

namespace acsos {

namespace {
constexpr double kDropTol = 0.0;  // exact zero terms only
}

MultiPoly MultiPoly::constant(double c) {
  MultiPoly p;
  if (c != 0.0) p.terms_[{}] = c;
  return p;
}

MultiPoly MultiPoly::var(const std::string& name) {
  MultiPoly p({name});
  p.terms_[{1}] = 1.0;
  return p;
}

int MultiPoly::degree() const {
  int deg = -1;
  for (const auto& [e, c] : terms_) {
    int t = 0;
    for (int k : e) t += k;
    deg = std::max(deg, t);
  }
  return deg;
}

void MultiPoly::add_term(const Exponents& exps, double coef) {
  if (exps.size() != vars_.size())
    throw std::invalid_argument("MultiPoly::add_term: exponent arity mismatch");
  auto it = terms_.find(exps);
  if (it == terms_.end()) {
    if (coef != kDropTol) terms_[exps] = coef;
  } else {
    it->second += coef;
    if (it->second == 0.0) terms_.erase(it);
  }
}

double MultiPoly::eval(const std::map<std::string, double>& point) const {
  std::vector<double> vals(vars_.size());
  for (size_t i = 0; i < vars_.size(); ++i) {
    auto it = point.find(vars_[i]);
    if (it == point.end())
      throw std::invalid_argument("MultiPoly::eval: missing variable '" +
                                  vars_[i] + "'");
    vals[i] = it->second;
  }
  // Kahan compensated summation over terms
  double sum = 0.0, comp = 0.0;
  for (const auto& [e, c] : terms_) {
    double m = c;
    for (size_t i = 0; i < e.size(); ++i)
      for (int k = 0; k < e[i]; ++k) m *= vals[i];
    const double y = m - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return sum;
}

MultiPoly MultiPoly::remapped(const std::vector<std::string>& new_vars) const {
  std::vector<int> idx(vars_.size());
  for (size_t i = 0; i < vars_.size(); ++i) {
    auto it = std::find(new_vars.begin(), new_vars.end(), vars_[i]);
    idx[i] = static_cast<int>(it - new_vars.begin());
  }
  MultiPoly out(new_vars);
  for (const auto& [e, c] : terms_) {
    Exponents ne(new_vars.size(), 0);
    for (size_t i = 0; i < e.size(); ++i) ne[idx[i]] = e[i];
    out.add_term(ne, c);
  }
  return out;
}

void MultiPoly::merge_vars(MultiPoly& a, MultiPoly& b) {
  if (a.vars_ == b.vars_) return;
  std::vector<std::string> merged = a.vars_;
  for (const auto& v : b.vars_)
    if (std::find(merged.begin(), merged.end(), v) == merged.end())
      merged.push_back(v);
  a = a.remapped(merged);
  b = b.remapped(merged);
}

MultiPoly& MultiPoly::operator+=(const MultiPoly& rhs) {
  MultiPoly b = rhs;
  merge_vars(*this, b);
  for (const auto& [e, c] : b.terms_) add_term(e, c);
  return *this;
}

MultiPoly& MultiPoly::operator-=(const MultiPoly& rhs) {
  MultiPoly b = rhs.scale(-1.0);
  return *this += b;
}

MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
  MultiPoly x = a, y = b;
  MultiPoly::merge_vars(x, y);
  MultiPoly out(x.vars_);
  for (const auto& [ea, ca] : x.terms_) {
    for (const auto& [eb, cb] : y.terms_) {
      Exponents e(ea.size());
      for (size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      out.add_term(e, ca * cb);
    }
  }
  return out;
}

MultiPoly MultiPoly::scale(double c) const {
  MultiPoly out(vars_);
  if (c == 0.0) return out;
  for (const auto& [e, coef] : terms_) out.terms_[e] = coef * c;
  return out;
}

MultiPoly MultiPoly::pow(int k) const {
  MultiPoly out = MultiPoly::constant(1.0);
  MultiPoly base = *this;
  while (k > 0) {
    if (k & 1) out = out * base;
    base = base * base;
    k >>= 1;
  }
  return out;
}

MultiPoly MultiPoly::substitute(const std::string& name,
                                const MultiPoly& repl) const {
  auto it = std::find(vars_.begin(), vars_.end(), name);
  if (it == vars_.end()) return *this;
  const size_t vi = static_cast<size_t>(it - vars_.begin());
  std::vector<std::string> rest;
  for (size_t i = 0; i < vars_.size(); ++i)
    if (i != vi) rest.push_back(vars_[i]);

  MultiPoly out(rest);
  for (const auto& [e, c] : terms_) {
    Exponents re;
    re.reserve(rest.size());
    for (size_t i = 0; i < e.size(); ++i)
      if (i != vi) re.push_back(e[i]);
    MultiPoly term(rest);
    term.add_term(re, c);
    if (e[vi] > 0) term = term * repl.pow(e[vi]);
    out += term;
  }
  return out;
}

MultiPoly MultiPoly::reduce_boolean(
    const std::vector<std::string>& bool_vars) const {
  std::vector<bool> is_bool(vars_.size(), false);
  for (const auto& b : bool_vars) {
    auto it = std::find(vars_.begin(), vars_.end(), b);
    if (it != vars_.end()) is_bool[it - vars_.begin()] = true;
  }
  MultiPoly out(vars_);
  for (const auto& [e, c] : terms_) {
    Exponents ne = e;
    for (size_t i = 0; i < ne.size(); ++i)
      if (is_bool[i] && ne[i] > 1) ne[i] = 1;
    out.add_term(ne, c);
  }
  return out;
}

double MultiPoly::coeff_norm_sq() const {
  double s = 0.0;
  for (const auto& [e, c] : terms_) s += c * c;
  return s;
}

std::string MultiPoly::to_json() const {
  nlohmann::json j;
  j["vars"] = vars_;
  j["terms"] = nlohmann::json::array();
  for (const auto& [e, c] : terms_)
    j["terms"].push_back({{"exps", e}, {"coef", c}});
  return j.dump();
}

MultiPoly MultiPoly::from_json(const std::string& text) {
  auto j = nlohmann::json::parse(text);
  MultiPoly p(j.at("vars").get<std::vector<std::string>>());
  for (const auto& t : j.at("terms"))
    p.add_term(t.at("exps").get<Exponents>(), t.at("coef").get<double>());
  return p;
}

double chebyshev_T(int d, double x) {
  if (d == 0) return 1.0;
  if (d == 1) return x;
  double tm = 1.0, t = x;
  for (int k = 1; k < d; ++k) {
    const double tn = 2.0 * x * t - tm;
    tm = t;
    t = tn;
  }
  return t;
}

}  // namespace acsos
