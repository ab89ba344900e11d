#pragma once

// Dormand-Prince 8(5,3) explicit Runge-Kutta core shared by the matrix
// (fundamental solution) and scalar (Pruefer angle) integrations.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "canonsys/errors.hpp"

namespace canonsys::ode {

template <std::size_t N>
using State = std::array<double, N>;

struct StepControl {
  double rel_tol = 1e-13;
  double abs_tol = 1e-13;
  double initial_step = 0.05;
  double max_step = 0.5;
  std::size_t max_steps = 2'000'000;
};

struct Stats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
};

namespace dop853 {
// Hairer & Wanner coefficient set.
inline constexpr double c2 = 0.526001519587677318785587544488e-01;
inline constexpr double c3 = 0.789002279381515978178381316732e-01;
inline constexpr double c4 = 0.118350341907227396726757197510e+00;
inline constexpr double c5 = 0.281649658092772603273242802490e+00;
inline constexpr double c6 = 0.333333333333333333333333333333e+00;
inline constexpr double c7 = 0.25e+00;
inline constexpr double c8 = 0.307692307692307692307692307692e+00;
inline constexpr double c9 = 0.651282051282051282051282051282e+00;
inline constexpr double c10 = 0.6e+00;
inline constexpr double c11 = 0.857142857142857142857142857142e+00;

inline constexpr double a21 = 5.26001519587677318785587544488e-2;
inline constexpr double a31 = 1.97250569845378994544595329183e-2;
inline constexpr double a32 = 5.91751709536136983633785987549e-2;
inline constexpr double a41 = 2.95875854768068491816892993775e-2;
inline constexpr double a43 = 8.87627564304205475450678981324e-2;
inline constexpr double a51 = 2.41365134159266685502369798665e-1;
inline constexpr double a53 = -8.84549479328286085344864962717e-1;
inline constexpr double a54 = 9.24834003261792003115737966543e-1;
inline constexpr double a61 = 3.7037037037037037037037037037e-2;
inline constexpr double a64 = 1.70828608729473871279604482173e-1;
inline constexpr double a65 = 1.25467687566822425016691814123e-1;
inline constexpr double a71 = 3.7109375e-2;
inline constexpr double a74 = 1.70252211019544039314978060272e-1;
inline constexpr double a75 = 6.02165389804559606850219397283e-2;
inline constexpr double a76 = -1.7578125e-2;
inline constexpr double a81 = 3.70920001185047927108779319836e-2;
inline constexpr double a84 = 1.70383925712239993810214054705e-1;
inline constexpr double a85 = 1.07262030446373284651809199168e-1;
inline constexpr double a86 = -1.53194377486244017527936158236e-2;
inline constexpr double a87 = 8.27378916381402288758473766002e-3;
inline constexpr double a91 = 6.24110958716075717114429577812e-1;
inline constexpr double a94 = -3.36089262944694129406857109825e0;
inline constexpr double a95 = -8.68219346841726006818189891453e-1;
inline constexpr double a96 = 2.75920996994467083049415600797e1;
inline constexpr double a97 = 2.01540675504778934086186788979e1;
inline constexpr double a98 = -4.34898841810699588477366255144e1;
inline constexpr double a101 = 4.77662536438264365890433908527e-1;
inline constexpr double a104 = -2.48811461997166764192642586468e0;
inline constexpr double a105 = -5.90290826836842996371446475743e-1;
inline constexpr double a106 = 2.12300514481811942347288949897e1;
inline constexpr double a107 = 1.52792336328824235832596922938e1;
inline constexpr double a108 = -3.32882109689848629194453265587e1;
inline constexpr double a109 = -2.03312017085086261358222928593e-2;
inline constexpr double a111 = -9.3714243008598732571704021658e-1;
inline constexpr double a114 = 5.18637242884406370830023853209e0;
inline constexpr double a115 = 1.09143734899672957818500254654e0;
inline constexpr double a116 = -8.14978701074692612513997267357e0;
inline constexpr double a117 = -1.85200656599969598641566180701e1;
inline constexpr double a118 = 2.27394870993505042818970056734e1;
inline constexpr double a119 = 2.49360555267965238987089396762e0;
inline constexpr double a1110 = -3.0467644718982195003823669022e0;
inline constexpr double a121 = 2.27331014751653820792359768449e0;
inline constexpr double a124 = -1.05344954667372501984066689879e1;
inline constexpr double a125 = -2.00087205822486249909675718444e0;
inline constexpr double a126 = -1.79589318631187989172765950534e1;
inline constexpr double a127 = 2.79488845294199600508499808837e1;
inline constexpr double a128 = -2.85899827713502369474065508674e0;
inline constexpr double a129 = -8.87285693353062954433549289258e0;
inline constexpr double a1210 = 1.23605671757943030647266201528e1;
inline constexpr double a1211 = 6.43392746015763530355970484046e-1;

inline constexpr double b1 = 5.42937341165687622380535766363e-2;
inline constexpr double b6 = 4.45031289275240888144113950566e0;
inline constexpr double b7 = 1.89151789931450038304281599044e0;
inline constexpr double b8 = -5.8012039600105847814672114227e0;
inline constexpr double b9 = 3.1116436695781989440891606237e-1;
inline constexpr double b10 = -1.52160949662516078556178806805e-1;
inline constexpr double b11 = 2.01365400804030348374776537501e-1;
inline constexpr double b12 = 4.47106157277725905176885569043e-2;

inline constexpr double bhh1 = 0.244094488188976377952755905512e+00;
inline constexpr double bhh2 = 0.733846688281611857341361741547e+00;
inline constexpr double bhh3 = 0.220588235294117647058823529412e-01;

inline constexpr double er1 = 0.1312004499419488073250102996e-01;
inline constexpr double er6 = -0.1225156446376204440720569753e+01;
inline constexpr double er7 = -0.4957589496572501915214079952e+00;
inline constexpr double er8 = 0.1664377182454986536961530415e+01;
inline constexpr double er9 = -0.3503288487499736816886487290e+00;
inline constexpr double er10 = 0.3341791187130174790297318841e+00;
inline constexpr double er11 = 0.8192320648511571246570742613e-01;
inline constexpr double er12 = -0.2235530786388629525884427845e-01;
}  // namespace dop853

/// One DOP853 step of size h from (z, y). Returns the 8th-order solution and,
/// through `err`, the scaled error norm (accept when err <= 1).
template <std::size_t N, class Rhs>
State<N> dop853_step(const Rhs& f, double z, const State<N>& y, double h,
                     const StepControl& ctl, double* err) {
  using namespace dop853;
  std::array<State<N>, 12> k;
  State<N> w;

  auto stage = [&](double c, auto&& combo, State<N>& out) {
    for (std::size_t i = 0; i < N; ++i) w[i] = y[i] + h * combo(i);
    f(z + c * h, w, out);
  };

  f(z, y, k[0]);
  stage(c2, [&](std::size_t i) { return a21 * k[0][i]; }, k[1]);
  stage(c3, [&](std::size_t i) { return a31 * k[0][i] + a32 * k[1][i]; }, k[2]);
  stage(c4, [&](std::size_t i) { return a41 * k[0][i] + a43 * k[2][i]; }, k[3]);
  stage(c5, [&](std::size_t i) { return a51 * k[0][i] + a53 * k[2][i] + a54 * k[3][i]; }, k[4]);
  stage(c6, [&](std::size_t i) { return a61 * k[0][i] + a64 * k[3][i] + a65 * k[4][i]; }, k[5]);
  stage(c7, [&](std::size_t i) {
    return a71 * k[0][i] + a74 * k[3][i] + a75 * k[4][i] + a76 * k[5][i];
  }, k[6]);
  stage(c8, [&](std::size_t i) {
    return a81 * k[0][i] + a84 * k[3][i] + a85 * k[4][i] + a86 * k[5][i] + a87 * k[6][i];
  }, k[7]);
  stage(c9, [&](std::size_t i) {
    return a91 * k[0][i] + a94 * k[3][i] + a95 * k[4][i] + a96 * k[5][i] + a97 * k[6][i] +
           a98 * k[7][i];
  }, k[8]);
  stage(c10, [&](std::size_t i) {
    return a101 * k[0][i] + a104 * k[3][i] + a105 * k[4][i] + a106 * k[5][i] + a107 * k[6][i] +
           a108 * k[7][i] + a109 * k[8][i];
  }, k[9]);
  stage(c11, [&](std::size_t i) {
    return a111 * k[0][i] + a114 * k[3][i] + a115 * k[4][i] + a116 * k[5][i] + a117 * k[6][i] +
           a118 * k[7][i] + a119 * k[8][i] + a1110 * k[9][i];
  }, k[10]);
  stage(1.0, [&](std::size_t i) {
    return a121 * k[0][i] + a124 * k[3][i] + a125 * k[4][i] + a126 * k[5][i] + a127 * k[6][i] +
           a128 * k[7][i] + a129 * k[8][i] + a1210 * k[9][i] + a1211 * k[10][i];
  }, k[11]);

  State<N> out;
  double err5 = 0.0, err3 = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    const double slope = b1 * k[0][i] + b6 * k[5][i] + b7 * k[6][i] + b8 * k[7][i] +
                         b9 * k[8][i] + b10 * k[9][i] + b11 * k[10][i] + b12 * k[11][i];
    out[i] = y[i] + h * slope;
    if (err != nullptr) {
      const double sk = ctl.abs_tol + ctl.rel_tol * std::max(std::abs(y[i]), std::abs(out[i]));
      const double e3 = slope - bhh1 * k[0][i] - bhh2 * k[8][i] - bhh3 * k[11][i];
      const double e5 = er1 * k[0][i] + er6 * k[5][i] + er7 * k[6][i] + er8 * k[7][i] +
                        er9 * k[8][i] + er10 * k[9][i] + er11 * k[10][i] + er12 * k[11][i];
      err3 += (e3 / sk) * (e3 / sk);
      err5 += (e5 / sk) * (e5 / sk);
    }
  }
  if (err != nullptr) {
    double deno = err5 + 0.01 * err3;
    if (deno <= 0.0) deno = 1.0;
    *err = std::abs(h) * err5 * std::sqrt(1.0 / (static_cast<double>(N) * deno));
  }
  return out;
}

/// Adaptive integration of y' = f(z, y) from z0 to z1 (z1 > z0).
///
/// `post(z, y)` runs after every accepted step and may modify y in place.
/// Accepted step endpoints are appended to `mesh` when non-null; `h` carries the
/// suggested step size in and out so segmented calls keep their rhythm.
template <std::size_t N, class Rhs, class Post>
State<N> integrate_adaptive(const Rhs& f, double z0, double z1, State<N> y,
                            const StepControl& ctl, double& h, Post&& post,
                            std::vector<double>* mesh = nullptr, Stats* stats = nullptr) {
  constexpr double kSafe = 0.9;
  constexpr double kFacMin = 0.333;  // step shrink bound (h_new >= kFacMin * h)
  constexpr double kFacMax = 6.0;    // step growth bound
  double z = z0;
  h = std::clamp(h, 0.0, ctl.max_step);
  if (!(h > 0.0)) h = ctl.initial_step;
  std::size_t steps = 0;
  bool last_rejected = false;

  while (z < z1) {
    if (++steps > ctl.max_steps) {
      throw StepSizeUnderflow("step budget exhausted at z = " + std::to_string(z));
    }
    const double remaining = z1 - z;
    bool clipped = false;
    double step = h;
    if (step >= remaining) {
      step = remaining;
      clipped = true;
    }
    if (step < 1e-14 * std::max(1.0, std::abs(z))) {
      throw StepSizeUnderflow("step size underflow at z = " + std::to_string(z));
    }
    double err = 0.0;
    State<N> next = dop853_step<N>(f, z, y, step, ctl, &err);
    if (!std::isfinite(err)) err = std::numeric_limits<double>::max();
    const double fac11 = std::pow(err, 0.125);
    if (err <= 1.0) {
      z = clipped ? z1 : z + step;
      y = next;
      post(z, y);
      if (mesh != nullptr) mesh->push_back(z);
      if (stats != nullptr) ++stats->accepted;
      double grow = err == 0.0 ? kFacMax : std::clamp(kSafe / fac11, kFacMin, kFacMax);
      if (last_rejected) grow = std::min(grow, 1.0);
      // A clipped final step says nothing about the natural step size.
      if (!clipped) h = std::min(step * grow, ctl.max_step);
      last_rejected = false;
    } else {
      if (stats != nullptr) ++stats->rejected;
      h = step * std::max(kFacMin * 0.5, kSafe / fac11);
      last_rejected = true;
    }
  }
  return y;
}

/// Replays a recorded mesh with one unconditional DOP853 step per interval.
template <std::size_t N, class Rhs, class Post>
State<N> integrate_on_mesh(const Rhs& f, double z0, const std::vector<double>& mesh,
                           State<N> y, Post&& post) {
  double z = z0;
  for (double zn : mesh) {
    y = dop853_step<N>(f, z, y, zn - z, StepControl{}, nullptr);
    z = zn;
    post(z, y);
  }
  return y;
}

}  // namespace canonsys::ode
