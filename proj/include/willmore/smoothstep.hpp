#pragma once

namespace willmore {

// Degree-7 smoothstep on [0,1] (C^3 joins) and its derivatives up to order 4.
inline double smoothstep7(double x, int derivative = 0) {
    if (x <= 0.0 || x >= 1.0) {
        if (derivative > 0) return 0.0;
        return x <= 0.0 ? 0.0 : 1.0;
    }
    const double x2 = x * x, x3 = x2 * x, x4 = x3 * x;
    switch (derivative) {
        case 0: return x4 * (35.0 - 84.0 * x + 70.0 * x2 - 20.0 * x3);
        case 1: return x3 * (140.0 - 420.0 * x + 420.0 * x2 - 140.0 * x3);
        case 2: return x2 * (420.0 - 1680.0 * x + 2100.0 * x2 - 840.0 * x3);
        case 3: return x * (840.0 - 5040.0 * x + 8400.0 * x2 - 4200.0 * x3);
        case 4: return 840.0 - 10080.0 * x + 25200.0 * x2 - 16800.0 * x3;
        default: return 0.0;
    }
}

// 0 below lo, 1 above hi.
inline double ramp(double x, double lo, double hi, int derivative = 0) {
    const double w = hi - lo;
    double scale = 1.0;
    for (int i = 0; i < derivative; ++i) scale /= w;
    return scale * smoothstep7((x - lo) / w, derivative);
}

}  // namespace willmore
