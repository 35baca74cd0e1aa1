// Timing harness comparing the serial reference paths against the OpenMP
// kernels on the two heaviest data-parallel workloads.

#include <chrono>
#include <cstdio>
#include <memory>

#include "greenwalk/green.hpp"
#include "greenwalk/parallel.hpp"

using namespace greenwalk;

namespace {

template <typename Fn>
double time_it(Fn&& fn) {
  auto t0 = std::chrono::steady_clock::now();
  fn();
  auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(t1 - t0).count();
}

AffineSyllable swap_xy() {
  GaussianRational zero, one{Rational(1)};
  return make_affine(zero, one, one, zero, zero, zero);
}

}  // namespace

int main(int argc, char** argv) {
  long samples = argc > 1 ? std::atol(argv[1]) : 200000;
  int grid = argc > 2 ? std::atoi(argv[2]) : 96;

  ElementarySyllable e = make_elementary(GaussianRational{Rational(-1)},
                                         UniPoly::monomial(2, GaussianRational{Rational(1)}),
                                         GaussianRational{Rational(1)}, GaussianRational{});
  HFamily fam;
  fam.members.push_back(make_member(swap_xy(), e));
  FiltrationParams params = compute_constants(fam);

  std::vector<MeasureSpec::Atom> atoms;
  atoms.push_back(
      {reduce_word(AmalgamWord::from_syllables({Syllable(swap_xy()), Syllable(e)})), Rational(1)});
  auto mu = std::make_shared<const MeasureSpec>(make_measure(std::move(atoms), false, true));
  WalkPath path(mu, 1);
  PrefixTable table = stabilization_times(path, 45, 60);
  StablePrefix prefix = StablePrefix::from_table(table);

  SliceWindow win;
  win.origin_x = {-3.0, 0.0};
  win.origin_y = {-3.0, 0.0};
  win.ex_x = {6.0, 0.0};
  win.ey_y = {6.0, 0.0};
  win.nx = grid;
  win.ny = grid;

  std::printf("threads available: %d\n", max_parallel_threads());
  std::printf("%-34s %10s %10s %8s\n", "kernel", "serial[s]", "openmp[s]", "speedup");

  double cert_s = time_it([&] {
    (void)certify_family_monte_carlo(fam, params, samples, 7, 650.0, false);
  });
  double cert_p = time_it([&] {
    (void)certify_family_monte_carlo(fam, params, samples, 7, 650.0, true);
  });
  std::printf("%-34s %10.3f %10.3f %8.2f\n", "monte-carlo certification", cert_s, cert_p,
              cert_s / cert_p);

  double rend_s = time_it([&] { (void)render_slice(prefix, params, win, 1e-9, 300, false); });
  double rend_p = time_it([&] { (void)render_slice(prefix, params, win, 1e-9, 300, true); });
  std::printf("%-34s %10.3f %10.3f %8.2f\n", "escape-value raster", rend_s, rend_p,
              rend_s / rend_p);
  return 0;
}
