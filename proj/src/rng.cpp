#include "occtime/rng.hpp"

namespace occtime {

double PathRng::normal_tail(int i, double x, std::uint64_t sign) {
    const detail::Ziggurat& z = detail::ziggurat();
    if (i == 0) {
        double a, b;
        do {
            a = -std::log(uniform()) / detail::Ziggurat::R;
            b = -std::log(uniform());
        } while (b + b < a * a);
        return detail::flip(detail::Ziggurat::R + a, sign);
    }
    if (z.f[i + 1] + uniform() * (z.f[i] - z.f[i + 1]) < std::exp(-0.5 * x * x)) return detail::flip(x, sign);
    return normal();
}

}  // namespace occtime
