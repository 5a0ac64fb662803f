#pragma once

#include <array>

namespace rbm::detail {

// 15-point Kronrod rule with its embedded 7-point Gauss rule on [-1, 1].
// Abscissae are listed for the non-negative half; index 7 is the centre.
struct GaussKronrod15 {
  static constexpr std::array<double, 8> x = {
      0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
      0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
      0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
      0.207784955007898467600689403773245, 0.0};
  static constexpr std::array<double, 8> wk = {
      0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
      0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
      0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
      0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
  // Gauss weights attached to x[1], x[3], x[5], x[7].
  static constexpr std::array<double, 4> wg = {
      0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
      0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

  // The 15 abscissae in increasing order mapped to [a, b].
  static std::array<double, 15> points(double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    std::array<double, 15> out{};
    for (int i = 0; i < 7; ++i) {
      out[i] = c - h * x[i];
      out[14 - i] = c + h * x[i];
    }
    out[7] = c;
    return out;
  }

  // Kronrod weight of the point with index i in points() order.
  static double kronrod_weight(int i) { return wk[i < 7 ? i : (i > 7 ? 14 - i : 7)]; }

  // Gauss weight of the point with index i in points() order (0 for Kronrod-only points).
  static double gauss_weight(int i) {
    const int j = i < 7 ? i : (i > 7 ? 14 - i : 7);
    return (j % 2 == 1) ? wg[j / 2] : 0.0;
  }
};

}  // namespace rbm::detail
