#pragma once

// Reference values produced by tests/oracle/fbp_oracle.py (60-digit mpmath,
// plain bisection, numerical differentiation). Do not regenerate from the C++ code.

#include "occtime/model.hpp"

namespace occtime::fixtures {

inline ModelParams second_params() { return {0.03, 0.08, 0.25, 1.0, 0.05, 5.0}; }
inline ModelParams r_above_lambda_params() { return {0.06, 0.10, 0.20, 1.0, 0.02, 10.0}; }

namespace canonical {
inline constexpr double rho = 0.85813051185342103415;
inline constexpr double y0 = 0.98324789115836399139;
inline constexpr double yL = 1.1458022731702080576;
inline constexpr double beta = 0.000022787459716311294483;
// (w, y, m, pi_star) with pi_star at w = 0 taken from above
inline constexpr double points[][4] = {
    {-5.0, 1.057839889047429059, 19.496982430093410413, 65.404254229554502257},
    {-2.0, 1.0116341576710724969, 16.393907845150920529, 69.014237982358252636},
    {-1.0, 0.99721138609867565363, 15.389524085006467043, 70.274701530619228351},
    {-0.5, 0.99017332850703319051, 14.892682644247704046, 70.915248653469469385},
    {0.0, 0.98324789115836399139, 14.399331986645620412, 20.71067811865475244},
    {10.0, 0.57372206894032769721, 6.7215721390498426598, 16.568542494923801952},
    {25.0, 0.18446429883635918189, 1.3507085560586959184, 10.35533905932737622},
};
inline constexpr double dyL_dL = -0.037966083130680753955;
inline constexpr double z = 0.53621223249160316275;
// m(-1) and pi_star(-1) at L = 5, 20, 100, 1000
inline constexpr double by_L[][3] = {
    {5.0, 19.699748538539029436, 59.28340258092929944},
    {20.0, 10.522034296606256163, 93.613561655918200055},
    {100.0, 2.807047496246302754, 297.57725345537540859},
    {1000.0, 0.29529319638320599882, 2667.7659629268927873},
};
// pi_star(w) / L at L = 1e3 and 1e4 for w = -0.5, -1, -2
inline constexpr double slope_1e3[] = {2.66875645298535, 2.66776596292689, 2.66578527466221};
inline constexpr double slope_1e4[] = {2.64050573069552, 2.64040582679636, 2.64020602184954};
}  // namespace canonical

namespace second {
inline constexpr double B1 = 1.581138830084189665999447;
inline constexpr double B2 = -1.581138830084189665999447;
inline constexpr double rho = 0.92021603288126608968;
inline constexpr double y0 = 1.1453496015878375061;
inline constexpr double yL = 1.2446529517657513125;
inline constexpr double beta = 0.0010086495928383651785;
inline constexpr double points[][4] = {
    {-2.0, 1.1829984646870473794, 16.360138670327035388, 48.55361970167198876},
    {-1.0, 1.1638442384682957584, 15.186773259865134154, 49.471255862329867594},
    {0.0, 1.1453496015878375061, 14.032230331701435043, 15.497035468911724427},
    {10.0, 0.61999629358778896067, 5.3171115169157251582, 10.847924828238207099},
};
inline constexpr double dyL_dL = -0.059621098909368253228;
inline constexpr double z = 0.62406894250454472498;
}  // namespace second

namespace r_above_lambda {
inline constexpr double B1 = 3.3027756377319946466;
inline constexpr double B2 = -0.30277563773199464656;
inline constexpr double rho = 0.86653566533644302042;
inline constexpr double y0 = 2.231405047240351564;
inline constexpr double yL = 2.5750873697437270415;
inline constexpr double beta = 0.4585141085060032565;
inline constexpr double points[][4] = {
    {-5.0, 2.4089033662401763671, 37.535567205529458804, 70.174318309797983081},
    {-1.0, 2.2678664393873040118, 28.17950952717342855, 62.621594152926255916},
    {0.0, 2.231405047240351564, 25.929832683729374637, 38.379593962199910776},
};
inline constexpr double dyL_dL = -0.10458222842781258975;
}  // namespace r_above_lambda

}  // namespace occtime::fixtures
