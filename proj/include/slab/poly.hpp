#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

namespace slab {

/// Univariate polynomial with real coefficients, ascending degree.
/// The formal derivative is exact, which keeps Poisson brackets analytic.
class Poly1 {
public:
    Poly1() : coef_{0.0} {}
    explicit Poly1(std::vector<double> coeffs) : coef_(std::move(coeffs)) {
        if (coef_.empty())
            coef_.push_back(0.0);
        trim();
    }
    static Poly1 constant(double c) { return Poly1({c}); }

    const std::vector<double>& coeffs() const { return coef_; }
    int degree() const { return static_cast<int>(coef_.size()) - 1; }
    bool is_zero() const { return coef_.size() == 1 && coef_[0] == 0.0; }

    // Horner evaluation.
    double operator()(double t) const {
        double acc = 0.0;
        for (std::size_t i = coef_.size(); i-- > 0;)
            acc = acc * t + coef_[i];
        return acc;
    }

    Poly1 derivative() const {
        if (coef_.size() == 1)
            return Poly1();
        std::vector<double> d(coef_.size() - 1);
        for (std::size_t i = 1; i < coef_.size(); ++i)
            d[i - 1] = coef_[i] * static_cast<double>(i);
        return Poly1(std::move(d));
    }

    friend Poly1 operator+(const Poly1& a, const Poly1& b) {
        std::vector<double> c(std::max(a.coef_.size(), b.coef_.size()), 0.0);
        for (std::size_t i = 0; i < a.coef_.size(); ++i) c[i] += a.coef_[i];
        for (std::size_t i = 0; i < b.coef_.size(); ++i) c[i] += b.coef_[i];
        return Poly1(std::move(c));
    }
    friend Poly1 operator-(const Poly1& a, const Poly1& b) {
        std::vector<double> c(std::max(a.coef_.size(), b.coef_.size()), 0.0);
        for (std::size_t i = 0; i < a.coef_.size(); ++i) c[i] += a.coef_[i];
        for (std::size_t i = 0; i < b.coef_.size(); ++i) c[i] -= b.coef_[i];
        return Poly1(std::move(c));
    }
    friend Poly1 operator*(const Poly1& a, const Poly1& b) {
        std::vector<double> c(a.coef_.size() + b.coef_.size() - 1, 0.0);
        for (std::size_t i = 0; i < a.coef_.size(); ++i)
            for (std::size_t j = 0; j < b.coef_.size(); ++j)
                c[i + j] += a.coef_[i] * b.coef_[j];
        return Poly1(std::move(c));
    }
    friend Poly1 operator*(double s, const Poly1& a) {
        std::vector<double> c = a.coef_;
        for (double& x : c) x *= s;
        return Poly1(std::move(c));
    }
    friend bool operator==(const Poly1& a, const Poly1& b) { return a.coef_ == b.coef_; }

private:
    void trim() {
        while (coef_.size() > 1 && coef_.back() == 0.0)
            coef_.pop_back();
    }
    std::vector<double> coef_;
};

/// Forward-mode scalar carrying a value and its gradient in the three
/// spatial coordinates. Used to get exact first derivatives of metric data.
struct Grad3 {
    double v = 0.0;
    std::array<double, 3> d{0.0, 0.0, 0.0};

    Grad3() = default;
    Grad3(double value) : v(value) {}
    Grad3(double value, int axis, double slope) : v(value) { d[axis] = slope; }

    friend Grad3 operator+(const Grad3& a, const Grad3& b) {
        Grad3 r(a.v + b.v);
        for (int i = 0; i < 3; ++i) r.d[i] = a.d[i] + b.d[i];
        return r;
    }
    friend Grad3 operator-(const Grad3& a, const Grad3& b) {
        Grad3 r(a.v - b.v);
        for (int i = 0; i < 3; ++i) r.d[i] = a.d[i] - b.d[i];
        return r;
    }
    friend Grad3 operator-(const Grad3& a) {
        Grad3 r(-a.v);
        for (int i = 0; i < 3; ++i) r.d[i] = -a.d[i];
        return r;
    }
    friend Grad3 operator*(const Grad3& a, const Grad3& b) {
        Grad3 r(a.v * b.v);
        for (int i = 0; i < 3; ++i) r.d[i] = a.d[i] * b.v + a.v * b.d[i];
        return r;
    }
    friend Grad3 operator/(const Grad3& a, const Grad3& b) {
        Grad3 r(a.v / b.v);
        for (int i = 0; i < 3; ++i) r.d[i] = (a.d[i] - r.v * b.d[i]) / b.v;
        return r;
    }
    friend Grad3 operator*(double s, const Grad3& a) {
        Grad3 r(s * a.v);
        for (int i = 0; i < 3; ++i) r.d[i] = s * a.d[i];
        return r;
    }
};

inline Grad3 sqrt(const Grad3& a) {
    Grad3 r(std::sqrt(a.v));
    const double inv = 0.5 / r.v;
    for (int i = 0; i < 3; ++i) r.d[i] = a.d[i] * inv;
    return r;
}

/// Evaluate p at t treated as coordinate `axis`: value plus exact gradient.
inline Grad3 eval_grad(const Poly1& p, double t, int axis) {
    return Grad3(p(t), axis, p.derivative()(t));
}

/// Sparse multivariate polynomial in N variables. Exact partial derivatives;
/// used for explicit curve fields (N=3) and flat phase-space observables (N=6).
template <std::size_t N>
class MultiPoly {
public:
    struct Term {
        std::array<int, N> exp{};
        double coef = 0.0;
    };

    MultiPoly() = default;
    static MultiPoly constant(double c) {
        MultiPoly p;
        if (c != 0.0) p.terms_.push_back({{}, c});
        return p;
    }
    static MultiPoly variable(std::size_t i, double scale = 1.0) {
        MultiPoly p;
        Term t;
        t.exp[i] = 1;
        t.coef = scale;
        if (scale != 0.0) p.terms_.push_back(t);
        return p;
    }

    void add_term(const std::array<int, N>& exp, double coef) {
        for (auto& t : terms_)
            if (t.exp == exp) {
                t.coef += coef;
                if (t.coef == 0.0) {
                    t = terms_.back();
                    terms_.pop_back();
                }
                return;
            }
        if (coef != 0.0) terms_.push_back({exp, coef});
    }

    const std::vector<Term>& terms() const { return terms_; }

    double operator()(const std::array<double, N>& x) const {
        double acc = 0.0;
        for (const auto& t : terms_) {
            double m = t.coef;
            for (std::size_t i = 0; i < N; ++i)
                for (int k = 0; k < t.exp[i]; ++k) m *= x[i];
            acc += m;
        }
        return acc;
    }

    MultiPoly partial(std::size_t i) const {
        MultiPoly d;
        for (const auto& t : terms_) {
            if (t.exp[i] == 0) continue;
            Term s = t;
            s.coef *= s.exp[i];
            s.exp[i] -= 1;
            d.add_term(s.exp, s.coef);
        }
        return d;
    }

    friend MultiPoly operator+(const MultiPoly& a, const MultiPoly& b) {
        MultiPoly r = a;
        for (const auto& t : b.terms_) r.add_term(t.exp, t.coef);
        return r;
    }
    friend MultiPoly operator-(const MultiPoly& a, const MultiPoly& b) {
        MultiPoly r = a;
        for (const auto& t : b.terms_) r.add_term(t.exp, -t.coef);
        return r;
    }
    friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
        MultiPoly r;
        for (const auto& s : a.terms_)
            for (const auto& t : b.terms_) {
                std::array<int, N> e;
                for (std::size_t i = 0; i < N; ++i) e[i] = s.exp[i] + t.exp[i];
                r.add_term(e, s.coef * t.coef);
            }
        return r;
    }
    friend MultiPoly operator*(double s, const MultiPoly& a) {
        MultiPoly r;
        for (const auto& t : a.terms_) r.add_term(t.exp, s * t.coef);
        return r;
    }

private:
    std::vector<Term> terms_;
};

using Poly3 = MultiPoly<3>;
using Poly6 = MultiPoly<6>;

}  // namespace slab
