#pragma once

#include <span>
#include <vector>

namespace dispersive {

/// Univariate polynomial with real coefficients; coeffs()[k] multiplies x^k.
/// Trailing zero coefficients are trimmed, so the zero polynomial has no
/// coefficients and degree() == -1.
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<double> coeffs);

    static Polynomial constant(double c);
    static Polynomial monomial(int k, double c = 1.0);

    const std::vector<double>& coeffs() const noexcept { return coeffs_; }
    int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
    bool is_zero() const noexcept { return coeffs_.empty(); }
    double coefficient(int k) const noexcept;

    double operator()(double x) const;

    Polynomial derivative(int k = 1) const;
    /// Antiderivative vanishing at 0.
    Polynomial antiderivative() const;

    Polynomial& operator+=(const Polynomial& o);
    Polynomial& operator-=(const Polynomial& o);
    Polynomial& operator*=(double s);

    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator*(Polynomial a, double s) { return a *= s; }
    friend Polynomial operator*(double s, Polynomial a) { return a *= s; }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
    friend bool operator==(const Polynomial&, const Polynomial&) = default;

private:
    void trim();
    std::vector<double> coeffs_;
};

Polynomial differentiate(const Polynomial& p, int k);

double definite_integral(const Polynomial& p, double a, double b);

enum class Weight { One, X };

/// Exact value of the integral of w(x) p(x) q(x) over (0, L).
double inner_product(const Polynomial& p, const Polynomial& q, Weight weight, double length);

}  // namespace dispersive
