#include "ymland/boundary.hpp"

#include "ymland/harmonic.hpp"
#include "ymland/landscape.hpp"

#include <cmath>
#include <stdexcept>

namespace ymland {

BoundarySpec::BoundarySpec() : synth_(Mat3::Zero()) {}

BoundarySpec::BoundarySpec(std::array<PolyOneForm, 3> base, const Mat3& synth)
    : base_(std::move(base)), synth_(synth) {
    for (int l = 0; l < 3; ++l)
        if (!base_[l].is_harmonic())
            throw std::invalid_argument("BoundarySpec: base component " + std::to_string(l + 1) +
                                        " is not harmonic");
}

bool BoundarySpec::base_is_zero() const {
    for (const PolyOneForm& f : base_)
        for (const Poly4& c : f.comp)
            if (!c.is_zero()) return false;
    return true;
}

Mat3 curvature_asd(const BoundarySpec& spec, const Vec4& x) {
    Mat3 out;
    for (int l = 0; l < 3; ++l) {
        const std::array<Poly4, 6> w = spec.base()[l].exterior_derivative();
        TwoForm wx;
        for (int c = 0; c < 6; ++c) wx[c] = w[c].eval(x);
        const AsdCoeffs asd = asd_project(wx);
        for (int k = 0; k < 3; ++k) out(l, k) = asd[k] + spec.synth()(k, l);
    }
    return out;
}

HMatrix h_matrix(const Vec4& p) {
    if (p.norm() >= 1.0) throw std::invalid_argument("h_matrix: p must lie in the open unit ball");
    const Vec4 origin = Vec4::Zero();
    Mat4 da;
    for (int i = 0; i < 4; ++i) da.row(i) = alpha_grad(p, i + 1, origin).transpose();
    HMatrix h;
    h.h0 = 0.5 * (da(0, 0) + da(1, 1) + da(2, 2) + da(3, 3));
    h.h1 = 0.5 * (-da(0, 3) + da(1, 2) - da(2, 1) + da(3, 0));
    h.h2 = 0.5 * (da(0, 2) + da(1, 3) - da(2, 0) - da(3, 1));
    h.h3 = 0.5 * (-da(0, 1) + da(1, 0) + da(2, 3) - da(3, 2));
    return h;
}

Mat3 HMatrix::matrix() const {
    Mat3 m;
    m << h0, h1, h2, -h1, h0, h3, -h2, -h3, h0;
    return m;
}

BoundarySpec synthesize(const Mat3& target, const Vec4& p0, const std::array<PolyOneForm, 3>& base,
                        const QuadratureSpec& quad) {
    const BoundarySpec base_only(base, Mat3::Zero());
    const Mat3 m_base = M_decomposed(base_only, p0, quad).M;
    const Mat3 h = h_matrix(p0).matrix();
    const Mat3 a = (M_PI * M_PI * h).inverse() * (target - m_base);
    return BoundarySpec(base, a);
}

BoundarySpec perturb_nondegenerate(const BoundarySpec& spec, const Vec4& p0, double mu,
                                   const QuadratureSpec& quad) {
    if (mu <= 0.0) throw std::invalid_argument("perturb_nondegenerate: mu must be > 0");
    const Mat3 pi2h = M_PI * M_PI * h_matrix(p0).matrix();

    BoundarySpec cur = spec;
    Mat3 m = M_decomposed(cur, p0, quad).M;
    if (det_sign(m) == 0) {
        // The proof's "arbitrarily small perturbation" made concrete.
        cur = cur.with_synth(cur.synth() + 1e-8 * pi2h.inverse());
        m = M_decomposed(cur, p0, quad).M;
    }

    const SymSpectrum sp = sym_eigen(m.transpose() * m);
    Mat3 d = Mat3::Zero();
    d(0, 0) = 3.0 * mu;
    d(1, 1) = 2.0 * mu;
    d(2, 2) = mu;
    const Mat3 x = m.transpose().inverse() * sp.Q * d * sp.Q.transpose();
    return cur.with_synth(cur.synth() + pi2h.inverse() * x);
}

}  // namespace ymland
