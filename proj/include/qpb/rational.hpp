#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace qpb {

/// Exact rational on 64-bit integers with overflow-checked arithmetic.
/// Ample for the combinatorial sums here (denominators divide small powers
/// of two times tiny factorials); anything larger throws instead of wrapping.
class Rational {
  public:
    Rational() : num_(0), den_(1) {}
    Rational(std::int64_t n) : num_(n), den_(1) {}
    Rational(std::int64_t n, std::int64_t d) : num_(n), den_(d) {
        if (den_ == 0) throw std::invalid_argument("Rational: zero denominator");
        normalize();
    }

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }

    friend Rational operator+(const Rational& a, const Rational& b) {
        return Rational(checked(static_cast<__int128>(a.num_) * b.den_ +
                                static_cast<__int128>(b.num_) * a.den_),
                        checked(static_cast<__int128>(a.den_) * b.den_));
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        return a + Rational(-b.num_, b.den_);
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return Rational(checked(static_cast<__int128>(a.num_) * b.num_),
                        checked(static_cast<__int128>(a.den_) * b.den_));
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.num_ == 0) throw std::invalid_argument("Rational: division by zero");
        return Rational(checked(static_cast<__int128>(a.num_) * b.den_),
                        checked(static_cast<__int128>(a.den_) * b.num_));
    }

    bool operator==(const Rational&) const = default;

    friend bool operator<(const Rational& a, const Rational& b) {
        return static_cast<__int128>(a.num_) * b.den_ <
               static_cast<__int128>(b.num_) * a.den_;
    }
    friend bool operator<=(const Rational& a, const Rational& b) {
        return !(b < a);
    }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator>=(const Rational& a, const Rational& b) {
        return !(a < b);
    }

    Rational pow(int e) const {
        Rational r(1);
        for (int i = 0; i < e; ++i) r = r * *this;
        return r;
    }

    double to_double() const {
        return static_cast<double>(num_) / static_cast<double>(den_);
    }

    std::string to_string() const {
        return den_ == 1 ? std::to_string(num_)
                         : std::to_string(num_) + "/" + std::to_string(den_);
    }

  private:
    static std::int64_t checked(__int128 v) {
        if (v > INT64_MAX || v < INT64_MIN)
            throw std::overflow_error("Rational: 64-bit overflow");
        return static_cast<std::int64_t>(v);
    }

    void normalize() {
        if (den_ < 0) {
            num_ = -num_;
            den_ = -den_;
        }
        const std::int64_t g = std::gcd(num_ < 0 ? -num_ : num_, den_);
        if (g > 1) {
            num_ /= g;
            den_ /= g;
        }
    }

    std::int64_t num_;
    std::int64_t den_;
};

}  // namespace qpb
