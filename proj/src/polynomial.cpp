#include "dispersive/polynomial.hpp"

#include <algorithm>
#include <utility>

namespace dispersive {

Polynomial::Polynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

Polynomial Polynomial::constant(double c) { return Polynomial({c}); }

Polynomial Polynomial::monomial(int k, double c) {
    std::vector<double> v(static_cast<std::size_t>(k) + 1, 0.0);
    v.back() = c;
    return Polynomial(std::move(v));
}

void Polynomial::trim() {
    while (!coeffs_.empty() && coeffs_.back() == 0.0) coeffs_.pop_back();
}

double Polynomial::coefficient(int k) const noexcept {
    return k >= 0 && k < static_cast<int>(coeffs_.size()) ? coeffs_[static_cast<std::size_t>(k)] : 0.0;
}

double Polynomial::operator()(double x) const {
    double acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
    return acc;
}

Polynomial Polynomial::derivative(int k) const {
    if (k <= 0) return *this;
    if (k > degree()) return {};
    std::vector<double> out(coeffs_.size() - static_cast<std::size_t>(k));
    for (std::size_t i = 0; i < out.size(); ++i) {
        double falling = 1.0;
        for (int m = 0; m < k; ++m) falling *= static_cast<double>(i + static_cast<std::size_t>(k) - static_cast<std::size_t>(m));
        out[i] = coeffs_[i + static_cast<std::size_t>(k)] * falling;
    }
    return Polynomial(std::move(out));
}

Polynomial Polynomial::antiderivative() const {
    if (is_zero()) return {};
    std::vector<double> out(coeffs_.size() + 1, 0.0);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) out[i + 1] = coeffs_[i] / static_cast<double>(i + 1);
    return Polynomial(std::move(out));
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
    if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size(), 0.0);
    for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
    trim();
    return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
    if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size(), 0.0);
    for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
    trim();
    return *this;
}

Polynomial& Polynomial::operator*=(double s) {
    for (double& c : coeffs_) c *= s;
    trim();
    return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<double> out(a.coeffs_.size() + b.coeffs_.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
        for (std::size_t j = 0; j < b.coeffs_.size(); ++j) out[i + j] += a.coeffs_[i] * b.coeffs_[j];
    return Polynomial(std::move(out));
}

Polynomial differentiate(const Polynomial& p, int k) { return p.derivative(k); }

double definite_integral(const Polynomial& p, double a, double b) {
    const Polynomial anti = p.antiderivative();
    return anti(b) - anti(a);
}

double inner_product(const Polynomial& p, const Polynomial& q, Weight weight, double length) {
    Polynomial integrand = p * q;
    if (weight == Weight::X) integrand = integrand * Polynomial::monomial(1);
    return definite_integral(integrand, 0.0, length);
}

}  // namespace dispersive
