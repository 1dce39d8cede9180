#pragma once

// Polynomials in (x1..x4) with exact coefficient arithmetic for the
// derivative and Laplacian, used to represent harmonic-polynomial 1-forms.

#include "ymland/core.hpp"

#include <array>
#include <map>

namespace ymland {

class Poly4 {
  public:
    using Exponents = std::array<int, 4>;

    Poly4() = default;

    static Poly4 constant(double c);
    static Poly4 variable(int j);  // j in 1..4
    static Poly4 monomial(const Exponents& e, double c);

    void add_term(const Exponents& e, double c);

    double eval(const Vec4& x) const;
    Poly4 derivative(int j) const;  // d/dx_j, j in 1..4
    Poly4 laplacian() const;

    Poly4 operator+(const Poly4& o) const;
    Poly4 operator-(const Poly4& o) const;
    Poly4 operator*(double c) const;

    bool is_zero(double tol = 0.0) const;
    double max_abs_coeff() const;
    int degree() const;
    const std::map<Exponents, double>& terms() const { return terms_; }

  private:
    std::map<Exponents, double> terms_;
};

// A 1-form sum_j comp[j] dx^{j+1} with polynomial coefficients.
struct PolyOneForm {
    std::array<Poly4, 4> comp;

    bool is_harmonic(double tol = 1e-12) const;
    int degree() const;

    // Exterior derivative: coefficients of dx^a ^ dx^b in the order
    // (12, 13, 14, 23, 24, 34).
    std::array<Poly4, 6> exterior_derivative() const;
};

}  // namespace ymland
