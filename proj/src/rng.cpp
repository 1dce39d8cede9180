#include "ymland/rng.hpp"

#include <cmath>

namespace ymland {

double SplitMix64::next_normal() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    const double u = next_double_open0();
    const double v = next_double();
    const double r = std::sqrt(-2.0 * std::log(u));
    const double a = 2.0 * M_PI * v;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
}

Vec4 random_unit4(SplitMix64& rng) {
    Vec4 v;
    do {
        for (int i = 0; i < 4; ++i) v[i] = rng.next_normal();
    } while (v.squaredNorm() < 1e-12);
    return v.normalized();
}

Vec4 random_ball4(SplitMix64& rng) {
    const Vec4 dir = random_unit4(rng);
    const double r = std::pow(rng.next_double_open0(), 0.25);
    return r * dir;
}

Mat3 random_rotation(SplitMix64& rng) {
    const Vec4 q = random_unit4(rng);
    const double w = q[0], x = q[1], y = q[2], z = q[3];
    Mat3 r;
    r << 1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y),
        2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x),
        2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y);
    return r;
}

}  // namespace ymland
