// Times the decoding kernels on the serial path (threads = 1) against the
// OpenMP path (all cores) and verifies the two produce identical output.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>

#include "gkpstab/decode.hpp"
#include "gkpstab/optimize.hpp"

using namespace gkpstab;

namespace {

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - t0)
      .count();
}

void compare(const std::string& name,
             const std::function<DecodeReport(int)>& run) {
  const auto t0 = std::chrono::steady_clock::now();
  const DecodeReport serial = run(1);
  const double t_serial = ms_since(t0);

  const auto t1 = std::chrono::steady_clock::now();
  const DecodeReport parallel = run(0);  // 0: library picks all cores
  const double t_parallel = ms_since(t1);

  const double diff = (serial.v_out - parallel.v_out).cwiseAbs().maxCoeff();
  std::printf("%-28s serial %9.1f ms   parallel %9.1f ms   speedup %.2fx   "
              "max|diff| %.1e%s\n",
              name.c_str(), t_serial, t_parallel, t_serial / t_parallel, diff,
              diff == 0.0 ? " (bitwise)" : "");
  if (diff != 0.0) {
    std::fprintf(stderr, "%s: serial and parallel paths disagree\n",
                 name.c_str());
    std::exit(1);
  }
}

}  // namespace

int main(int argc, char** argv) {
  long long mc_samples = 200000;
  if (argc > 1) mc_samples = std::atoll(argv[1]);

  {
    const Lattice l = square(1);
    const CodeSpec code = make_code(single_layer_encoding(4.92, 1), l, 1, 1);
    const AgnModel noise = iid_noise(1e-2, 2);
    compare("quadrature square 1-mode", [&](int threads) {
      QuadConfig quad;
      quad.threads = threads;
      return output_covariance_quadrature(code, noise, FiniteGkp::ideal(),
                                          EstimatorKind::kMmse, {}, quad);
    });
  }
  {
    const Lattice l = d4();
    const CodeSpec code = make_code(single_layer_encoding(5.0, 2), l, 2, 2);
    const AgnModel noise = iid_noise(1e-2, 4);
    compare("mc d4 2-mode", [&](int threads) {
      McConfig mc;
      mc.samples = mc_samples;
      mc.threads = threads;
      return output_covariance_mc(code, noise, FiniteGkp::ideal(),
                                  EstimatorKind::kMmse, {}, mc);
    });
  }
  {
    const Lattice l = hexagonal_pair();
    const CodeSpec code = make_code(staircase_encoding(22.5, 2.04), l, 1, 2);
    const AgnModel noise = iid_noise(1e-2, 3);
    compare("mc staircase 3-mode", [&](int threads) {
      McConfig mc;
      mc.samples = mc_samples / 2;
      mc.threads = threads;
      return output_covariance_mc(code, noise, FiniteGkp::ideal(),
                                  EstimatorKind::kMmse, {}, mc);
    });
  }
  return 0;
}
