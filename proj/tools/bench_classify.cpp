// Compares the serial reference classifier with the OpenMP task-parallel one.
#include <chrono>
#include <cstdlib>
#include <iostream>

#ifdef NQM_HAS_OPENMP
#include <omp.h>
#endif

#include "nqm/search.hpp"

using namespace nqm;

namespace {

double time_run(ClassifyResult (*fn)(int, const std::vector<int>&, const ClassifyOptions&),
                int n, const ClassifyOptions& opt, ClassifyResult& out) {
  const auto t0 = std::chrono::steady_clock::now();
  out = fn(n, {1, 2, 4}, opt);
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
  const int n = argc > 1 ? std::atoi(argv[1]) : 5;
  int workers = 0;
#ifdef NQM_HAS_OPENMP
  workers = omp_get_max_threads();
#endif
  if (argc > 2) workers = std::atoi(argv[2]);
  if (workers < 2) workers = 2;

  ClassifyOptions serial_opt;
  serial_opt.policy = Policy::None;
  ClassifyOptions par_opt = serial_opt;
  par_opt.workers = workers;

  ClassifyResult ref, par;
  const double ts = time_run(classify_serial, n, serial_opt, ref);
  const double tp = time_run(classify, n, par_opt, par);

  std::cout << "order " << n << ", policy none\n";
  std::cout << "serial reference: " << ts << " s\n";
  std::cout << "parallel (" << workers << " workers): " << tp << " s\n";
  std::cout << "speedup: " << (tp > 0 ? ts / tp : 0) << "x\n";

  bool same = ref.per_level.size() == par.per_level.size();
  for (const auto& [lvl, vec] : ref.per_level)
    same = same && par.per_level.count(lvl) && par.per_level.at(lvl) == vec;
  std::cout << "outputs identical: " << (same ? "yes" : "NO") << "\n";
  return same ? 0 : 1;
}
