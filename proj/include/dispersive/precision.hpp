#pragma once

namespace dispersive {

// Working precision for collocation matrices, stencil weights and LU.
// Scaled collocation systems for D^{2l+1} have condition numbers of order
// (n/pi)^{2l+1}, which exceeds 1/eps of binary64 for l >= 3 at desk-scale n.
#if defined(__SIZEOF_FLOAT128__)
using wide_real = __float128;
inline constexpr double wide_epsilon = 1.925929944387235853e-34;  // 2^-112
#else
using wide_real = long double;
inline constexpr double wide_epsilon = static_cast<double>(__LDBL_EPSILON__);
#endif

template <class T>
constexpr T abs_value(T x) {
    return x < T(0) ? -x : x;
}

inline double to_double(wide_real x) { return static_cast<double>(x); }

}  // namespace dispersive
