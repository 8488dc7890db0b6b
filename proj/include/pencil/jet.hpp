#pragma once

#include <algorithm>
#include <array>
#include <complex>
#include <stdexcept>

namespace pencil {

using cplx = std::complex<double>;

/// Truncated Taylor series c_0 + c_1 e + ... + c_K e^K in one complex variable.
///
/// Arithmetic on jets propagates exact derivatives through a recursion without
/// finite differences; coefficient k is f^{(k)}(x0) / k!.  The order K is fixed
/// per value (bounded by kMaxOrder) and binary operations truncate to the
/// smaller order of their operands.
class Jet {
public:
    static constexpr int kMaxOrder = 15;

    Jet() = default;

    static Jet constant(cplx value, int order) {
        Jet j(order);
        j.c_[0] = value;
        return j;
    }

    /// x0 + e, the independent variable expanded at x0.
    static Jet variable(cplx x0, int order) {
        Jet j(order);
        j.c_[0] = x0;
        if (order >= 1) {
            j.c_[1] = 1.0;
        }
        return j;
    }

    int order() const { return order_; }
    cplx value() const { return c_[0]; }
    cplx operator[](int k) const { return c_[k]; }
    cplx& operator[](int k) { return c_[k]; }

    /// k-th derivative at the expansion point.
    cplx derivative(int k) const {
        double factorial = 1.0;
        for (int i = 2; i <= k; ++i) {
            factorial *= i;
        }
        return c_[k] * factorial;
    }

    Jet& operator+=(const Jet& o) {
        order_ = std::min(order_, o.order_);
        for (int k = 0; k <= order_; ++k) c_[k] += o.c_[k];
        return *this;
    }
    Jet& operator-=(const Jet& o) {
        order_ = std::min(order_, o.order_);
        for (int k = 0; k <= order_; ++k) c_[k] -= o.c_[k];
        return *this;
    }
    Jet& operator*=(cplx s) {
        for (int k = 0; k <= order_; ++k) c_[k] *= s;
        return *this;
    }
    Jet& operator/=(cplx s) {
        for (int k = 0; k <= order_; ++k) c_[k] /= s;
        return *this;
    }
    Jet& operator+=(cplx s) {
        c_[0] += s;
        return *this;
    }
    Jet& operator-=(cplx s) {
        c_[0] -= s;
        return *this;
    }

    friend Jet operator+(Jet a, const Jet& b) { return a += b; }
    friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
    friend Jet operator+(Jet a, cplx s) { return a += s; }
    friend Jet operator+(cplx s, Jet a) { return a += s; }
    friend Jet operator-(Jet a, cplx s) { return a -= s; }
    friend Jet operator*(Jet a, cplx s) { return a *= s; }
    friend Jet operator*(cplx s, Jet a) { return a *= s; }
    friend Jet operator/(Jet a, cplx s) { return a /= s; }
    friend Jet operator-(Jet a) { return a *= -1.0; }

    friend Jet operator*(const Jet& a, const Jet& b) {
        Jet r(std::min(a.order_, b.order_));
        for (int k = 0; k <= r.order_; ++k) {
            cplx s = 0.0;
            for (int i = 0; i <= k; ++i) s += a.c_[i] * b.c_[k - i];
            r.c_[k] = s;
        }
        return r;
    }

    friend Jet reciprocal(const Jet& a) {
        Jet r(a.order_);
        r.c_[0] = 1.0 / a.c_[0];
        for (int k = 1; k <= a.order_; ++k) {
            cplx s = 0.0;
            for (int i = 1; i <= k; ++i) s += a.c_[i] * r.c_[k - i];
            r.c_[k] = -s * r.c_[0];
        }
        return r;
    }

    friend Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }
    friend Jet operator/(cplx s, const Jet& b) { return reciprocal(b) * s; }

    /// exp(f) via the recurrence k e_k = sum_{i=1}^{k} i f_i e_{k-i}.
    friend Jet exp(const Jet& f) {
        Jet r(f.order_);
        r.c_[0] = std::exp(f.c_[0]);
        for (int k = 1; k <= f.order_; ++k) {
            cplx s = 0.0;
            for (int i = 1; i <= k; ++i) s += static_cast<double>(i) * f.c_[i] * r.c_[k - i];
            r.c_[k] = s / static_cast<double>(k);
        }
        return r;
    }

    friend Jet pow(const Jet& base, long long exponent) {
        Jet result = Jet::constant(1.0, base.order_);
        Jet b = exponent < 0 ? reciprocal(base) : base;
        unsigned long long e = exponent < 0 ? static_cast<unsigned long long>(-exponent)
                                            : static_cast<unsigned long long>(exponent);
        while (e != 0) {
            if (e & 1ULL) result = result * b;
            e >>= 1;
            if (e != 0) b = b * b;
        }
        return result;
    }

    /// Evaluate the truncated series at displacement e.
    cplx evaluate(cplx e) const {
        cplx s = 0.0;
        for (int k = order_; k >= 0; --k) s = s * e + c_[k];
        return s;
    }

private:
    explicit Jet(int order) : order_(order) {
        if (order < 0 || order > kMaxOrder) {
            throw std::out_of_range("Jet order out of range");
        }
    }

    int order_ = 0;
    std::array<cplx, kMaxOrder + 1> c_{};
};

} // namespace pencil
