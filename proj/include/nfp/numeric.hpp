#pragma once

// Exact scalar substrate: arbitrary-precision integers and rationals (GMP),
// plus a saturating count type for values that may be infinite.

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>

namespace nfp {

using Int = mpz_class;
using Rat = mpq_class;

inline Rat make_rat(const Int& num, const Int& den) {
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  Rat r(num, den);
  r.canonicalize();
  return r;
}

inline bool is_integer(const Rat& r) { return r.get_den() == 1; }

inline Int to_int(const Rat& r) {
  if (!is_integer(r)) throw std::domain_error("rational is not an integer: " + r.get_str());
  return r.get_num();
}

inline Int abs_int(const Int& a) { return a < 0 ? Int(-a) : a; }

// "p", "-p" or "p/q"; q > 0 after canonicalization.
inline Rat parse_rat(const std::string& s) {
  Rat r;
  if (r.set_str(s, 10) != 0) throw std::invalid_argument("malformed rational: '" + s + "'");
  r.canonicalize();
  return r;
}

inline std::string rat_str(const Rat& r) { return r.get_str(); }

// Nonnegative count or infinity, with saturating arithmetic. 0*inf is never
// formed by the algorithms here and is rejected.
class Count {
 public:
  Count() : finite_(true), value_(0) {}
  explicit Count(Int v) : finite_(true), value_(std::move(v)) {
    if (value_ < 0) throw std::invalid_argument("negative count");
  }
  static Count infinity() {
    Count c;
    c.finite_ = false;
    return c;
  }

  bool is_finite() const { return finite_; }
  const Int& value() const {
    if (!finite_) throw std::domain_error("count is infinite");
    return value_;
  }

  Count& operator+=(const Count& o) {
    if (!finite_ || !o.finite_) {
      finite_ = false;
    } else {
      value_ += o.value_;
    }
    return *this;
  }
  friend Count operator+(Count a, const Count& b) { return a += b; }

  Count& operator*=(const Count& o) {
    if ((!finite_ && o.finite_ && o.value_ == 0) || (!o.finite_ && finite_ && value_ == 0))
      throw std::domain_error("0 * infinity");
    if (!finite_ || !o.finite_) {
      finite_ = false;
    } else {
      value_ *= o.value_;
    }
    return *this;
  }
  friend Count operator*(Count a, const Count& b) { return a *= b; }

  friend bool operator==(const Count& a, const Count& b) {
    if (a.finite_ != b.finite_) return false;
    return !a.finite_ || a.value_ == b.value_;
  }
  friend bool operator!=(const Count& a, const Count& b) { return !(a == b); }

  // a <= b with infinity as top.
  friend bool operator<=(const Count& a, const Count& b) {
    if (!b.finite_) return true;
    if (!a.finite_) return false;
    return a.value_ <= b.value_;
  }

  std::string str() const { return finite_ ? value_.get_str() : "infinite"; }
  friend std::ostream& operator<<(std::ostream& os, const Count& c) { return os << c.str(); }

 private:
  bool finite_;
  Int value_;
};

}  // namespace nfp
