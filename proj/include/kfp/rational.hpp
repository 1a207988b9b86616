#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>

namespace kfp {

// Exact rational coefficient type for the symbolic polynomial identities.
class Rat {
  public:
    using Q = boost::multiprecision::cpp_rational;

    Rat() : q_(0) {}
    Rat(long long n) : q_(n) {}
    Rat(long long n, long long d) : q_(Q(n) / Q(d)) {}
    explicit Rat(Q q) : q_(std::move(q)) {}

    bool is_zero() const { return q_.is_zero(); }
    int sign() const { return q_.sign(); }

    Rat operator-() const { return Rat(Q(-q_)); }
    Rat operator+(const Rat& o) const { return Rat(Q(q_ + o.q_)); }
    Rat operator-(const Rat& o) const { return Rat(Q(q_ - o.q_)); }
    Rat operator*(const Rat& o) const { return Rat(Q(q_ * o.q_)); }
    Rat operator/(const Rat& o) const {
        if (o.is_zero()) throw std::domain_error("Rat: division by zero");
        return Rat(Q(q_ / o.q_));
    }
    Rat& operator+=(const Rat& o) { q_ += o.q_; return *this; }
    Rat& operator-=(const Rat& o) { q_ -= o.q_; return *this; }
    Rat& operator*=(const Rat& o) { q_ *= o.q_; return *this; }
    Rat& operator/=(const Rat& o) { return *this = *this / o; }

    bool operator==(const Rat& o) const { return q_ == o.q_; }
    bool operator!=(const Rat& o) const { return q_ != o.q_; }

    double to_double() const { return q_.convert_to<double>(); }
    std::string str() const { return q_.str(); }

  private:
    Q q_;
};

inline Rat abs(const Rat& r) { return r.sign() < 0 ? -r : r; }

}  // namespace kfp
