#include "gjext/vec.hpp"

#include <sstream>

namespace gjext {

RatVec RatVec::ones(int n) {
  RatVec v(n);
  for (int i = 0; i < n; ++i) v[i] = Rational(1);
  return v;
}

RatVec RatVec::basis(int n, int i) {
  if (i < 0 || i >= n) throw ConstructionError("basis index out of range");
  RatVec v(n);
  v[i] = Rational(1);
  return v;
}

bool RatVec::is_zero() const {
  for (const auto& x : c_)
    if (!x.is_zero()) return false;
  return true;
}

bool RatVec::is_integral() const {
  for (const auto& x : c_)
    if (!x.is_integer()) return false;
  return true;
}

RatVec RatVec::frac() const {
  RatVec v(dim());
  for (int i = 0; i < dim(); ++i) v[i] = c_[static_cast<size_t>(i)].frac();
  return v;
}

std::vector<Int> RatVec::floor() const {
  std::vector<Int> out;
  out.reserve(c_.size());
  for (const auto& x : c_) out.push_back(x.floor());
  return out;
}

Rational RatVec::linf_norm() const {
  Rational m(0);
  for (const auto& x : c_) m = max(m, x.abs());
  return m;
}

Rational RatVec::l1_norm() const {
  Rational s(0);
  for (const auto& x : c_) s += x.abs();
  return s;
}

std::string RatVec::str() const {
  std::ostringstream os;
  os << "(";
  for (int i = 0; i < dim(); ++i) {
    if (i) os << ", ";
    os << c_[static_cast<size_t>(i)].str();
  }
  os << ")";
  return os.str();
}

RatVec operator+(const RatVec& a, const RatVec& b) {
  require_same_dim(a, b, "vector addition");
  RatVec v(a.dim());
  for (int i = 0; i < a.dim(); ++i) v[i] = a[i] + b[i];
  return v;
}

RatVec operator-(const RatVec& a, const RatVec& b) {
  require_same_dim(a, b, "vector subtraction");
  RatVec v(a.dim());
  for (int i = 0; i < a.dim(); ++i) v[i] = a[i] - b[i];
  return v;
}

RatVec operator*(const Rational& s, const RatVec& a) {
  RatVec v(a.dim());
  for (int i = 0; i < a.dim(); ++i) v[i] = s * a[i];
  return v;
}

RatVec RatVec::operator-() const {
  RatVec v(dim());
  for (int i = 0; i < dim(); ++i) v[i] = -c_[static_cast<size_t>(i)];
  return v;
}

Rational dot(const RatVec& a, const RatVec& b) {
  require_same_dim(a, b, "dot product");
  Rational s(0);
  for (int i = 0; i < a.dim(); ++i) s += a[i] * b[i];
  return s;
}

bool operator<(const RatVec& a, const RatVec& b) {
  int n = std::min(a.dim(), b.dim());
  for (int i = 0; i < n; ++i) {
    if (a[i] < b[i]) return true;
    if (b[i] < a[i]) return false;
  }
  return a.dim() < b.dim();
}

void require_same_dim(const RatVec& a, const RatVec& b, const char* what) {
  if (a.dim() != b.dim())
    throw ConstructionError(std::string(what) + ": dimension mismatch (" + std::to_string(a.dim()) + " vs " +
                            std::to_string(b.dim()) + ")");
}

Int lcm_of_denominators(const RatVec& v) {
  Int l(1);
  for (const auto& x : v.coords()) l = lcm(l, x.den());
  return l;
}

}  // namespace gjext
