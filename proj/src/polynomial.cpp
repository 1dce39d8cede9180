#include "ymland/polynomial.hpp"

#include <cmath>
#include <stdexcept>

namespace ymland {

Poly4 Poly4::constant(double c) {
    Poly4 p;
    p.add_term({0, 0, 0, 0}, c);
    return p;
}

Poly4 Poly4::variable(int j) {
    if (j < 1 || j > 4) throw std::out_of_range("Poly4::variable: index must be in 1..4");
    Exponents e{0, 0, 0, 0};
    e[j - 1] = 1;
    return monomial(e, 1.0);
}

Poly4 Poly4::monomial(const Exponents& e, double c) {
    Poly4 p;
    p.add_term(e, c);
    return p;
}

void Poly4::add_term(const Exponents& e, double c) {
    for (int k : e)
        if (k < 0) throw std::invalid_argument("Poly4: negative exponent");
    if (c == 0.0) return;
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0.0) terms_.erase(it);
    }
}

double Poly4::eval(const Vec4& x) const {
    double sum = 0.0;
    for (const auto& [e, c] : terms_) {
        double t = c;
        for (int j = 0; j < 4; ++j)
            for (int k = 0; k < e[j]; ++k) t *= x[j];
        sum += t;
    }
    return sum;
}

Poly4 Poly4::derivative(int j) const {
    if (j < 1 || j > 4) throw std::out_of_range("Poly4::derivative: index must be in 1..4");
    Poly4 out;
    for (const auto& [e, c] : terms_) {
        if (e[j - 1] == 0) continue;
        Exponents d = e;
        d[j - 1] -= 1;
        out.add_term(d, c * e[j - 1]);
    }
    return out;
}

Poly4 Poly4::laplacian() const {
    Poly4 out;
    for (int j = 1; j <= 4; ++j) out = out + derivative(j).derivative(j);
    return out;
}

Poly4 Poly4::operator+(const Poly4& o) const {
    Poly4 out = *this;
    for (const auto& [e, c] : o.terms_) out.add_term(e, c);
    return out;
}

Poly4 Poly4::operator-(const Poly4& o) const {
    Poly4 out = *this;
    for (const auto& [e, c] : o.terms_) out.add_term(e, -c);
    return out;
}

Poly4 Poly4::operator*(double c) const {
    Poly4 out;
    for (const auto& [e, k] : terms_) out.add_term(e, k * c);
    return out;
}

bool Poly4::is_zero(double tol) const {
    for (const auto& [e, c] : terms_)
        if (std::abs(c) > tol) return false;
    return true;
}

double Poly4::max_abs_coeff() const {
    double m = 0.0;
    for (const auto& [e, c] : terms_) m = std::max(m, std::abs(c));
    return m;
}

int Poly4::degree() const {
    int d = 0;
    for (const auto& [e, c] : terms_) d = std::max(d, e[0] + e[1] + e[2] + e[3]);
    return d;
}

bool PolyOneForm::is_harmonic(double tol) const {
    for (const Poly4& f : comp) {
        const double scale = std::max(1.0, f.max_abs_coeff());
        if (!f.laplacian().is_zero(tol * scale)) return false;
    }
    return true;
}

int PolyOneForm::degree() const {
    int d = 0;
    for (const Poly4& f : comp) d = std::max(d, f.degree());
    return d;
}

std::array<Poly4, 6> PolyOneForm::exterior_derivative() const {
    // d(f_b dx^b) picks up (d f_b/d x_a - d f_a/d x_b) dx^a ^ dx^b for a < b.
    std::array<Poly4, 6> w;
    int idx = 0;
    for (int a = 1; a <= 4; ++a)
        for (int b = a + 1; b <= 4; ++b) w[idx++] = comp[b - 1].derivative(a) - comp[a - 1].derivative(b);
    return w;
}

}  // namespace ymland
