#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>

#include "mixedsdp/errors.hpp"
#include "mixedsdp/rational.hpp"

namespace mixedsdp {

// Sparse polynomial with exact rational coefficients in a fixed number of
// commuting variables. Monomials are exponent vectors; zero coefficients are
// never stored.
template <std::size_t NVars>
class DualPoly {
 public:
  using Monomial = std::array<std::uint8_t, NVars>;
  using Terms = std::map<Monomial, Rational>;

  DualPoly() = default;

  static DualPoly constant(const Rational& c) {
    DualPoly p;
    p.add(Monomial{}, c);
    return p;
  }

  static DualPoly variable(std::size_t var, const Rational& c = 1) {
    if (var >= NVars) throw DomainError("DualPoly::variable: index out of range");
    Monomial m{};
    m[var] = 1;
    DualPoly p;
    p.add(m, c);
    return p;
  }

  void add(const Monomial& m, const Rational& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }

  Rational coefficient(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Rational(0) : it->second;
  }

  // Value with every variable set to one.
  Rational sum_of_coefficients() const {
    Rational s = 0;
    for (const auto& [m, c] : terms_) s += c;
    return s;
  }

  DualPoly& operator+=(const DualPoly& o) {
    for (const auto& [m, c] : o.terms_) add(m, c);
    return *this;
  }

  DualPoly& operator-=(const DualPoly& o) {
    for (const auto& [m, c] : o.terms_) add(m, -c);
    return *this;
  }

  DualPoly& operator*=(const Rational& s) {
    if (s == 0) {
      terms_.clear();
      return *this;
    }
    for (auto& [m, c] : terms_) c *= s;
    return *this;
  }

  friend DualPoly operator+(DualPoly a, const DualPoly& b) { return a += b; }
  friend DualPoly operator-(DualPoly a, const DualPoly& b) { return a -= b; }
  friend DualPoly operator*(DualPoly a, const Rational& s) { return a *= s; }
  friend DualPoly operator*(const Rational& s, DualPoly a) { return a *= s; }

  friend DualPoly operator*(const DualPoly& a, const DualPoly& b) {
    DualPoly out;
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) {
        Monomial m;
        for (std::size_t i = 0; i < NVars; ++i)
          m[i] = static_cast<std::uint8_t>(ma[i] + mb[i]);
        out.add(m, ca * cb);
      }
    return out;
  }

  DualPoly pow(int e) const {
    DualPoly result = constant(1);
    DualPoly base = *this;
    while (e > 0) {
      if (e & 1) result = result * base;
      e >>= 1;
      if (e) base = base * base;
    }
    return result;
  }

  bool operator==(const DualPoly&) const = default;

 private:
  Terms terms_;
};

template <std::size_t NVars>
std::string to_string(const DualPoly<NVars>& p,
                      const std::array<const char*, NVars>& names) {
  if (p.is_zero()) return "0";
  std::string s;
  bool first = true;
  for (const auto& [m, c] : p.terms()) {
    if (!first) s += " + ";
    first = false;
    s += to_string(c);
    for (std::size_t i = 0; i < NVars; ++i) {
      if (m[i] == 0) continue;
      s += std::string("*") + names[i];
      if (m[i] > 1) s += "^" + std::to_string(m[i]);
    }
  }
  return s;
}

}  // namespace mixedsdp
