#include "levyheat/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cstring>
#include <memory>
#include <mutex>

namespace levyheat::fft {

namespace {

std::mutex& planner_mutex() {
  static std::mutex mu;
  return mu;
}

struct Buffer {
  explicit Buffer(std::size_t bytes) : p(fftw_malloc(bytes)) {
    if (!p) throw GridError("fftw_malloc failed");
  }
  ~Buffer() { fftw_free(p); }
  Buffer(const Buffer&) = delete;
  Buffer& operator=(const Buffer&) = delete;
  void* p;
};

struct Plan {
  explicit Plan(fftw_plan q) : p(q) {
    if (!p) throw GridError("FFTW could not create a plan");
  }
  ~Plan() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(p);
  }
  Plan(const Plan&) = delete;
  Plan& operator=(const Plan&) = delete;
  fftw_plan p;
};

std::size_t total(const std::vector<int>& dims) {
  std::size_t n = 1;
  for (int d : dims) n *= static_cast<std::size_t>(d);
  return n;
}

}  // namespace

std::size_t half_size(const std::vector<int>& dims) {
  return total(dims) / static_cast<std::size_t>(dims.back()) *
         (static_cast<std::size_t>(dims.back()) / 2 + 1);
}

std::vector<cplx> r2c(const Vec& in, const std::vector<int>& dims) {
  const std::size_t n = total(dims);
  if (in.size() != n) throw GridError("r2c: size mismatch");
  const std::size_t h = half_size(dims);
  Buffer bin(sizeof(double) * n);
  Buffer bout(sizeof(fftw_complex) * h);
  auto* din = static_cast<double*>(bin.p);
  auto* dout = static_cast<fftw_complex*>(bout.p);
  std::unique_ptr<Plan> plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = std::make_unique<Plan>(fftw_plan_dft_r2c(static_cast<int>(dims.size()), dims.data(),
                                                    din, dout, FFTW_ESTIMATE));
  }
  std::copy(in.begin(), in.end(), din);
  fftw_execute(plan->p);
  std::vector<cplx> out(h);
  std::memcpy(static_cast<void*>(out.data()), dout, sizeof(fftw_complex) * h);
  return out;
}

Vec c2r(const std::vector<cplx>& in, const std::vector<int>& dims) {
  const std::size_t n = total(dims);
  const std::size_t h = half_size(dims);
  if (in.size() != h) throw GridError("c2r: size mismatch");
  Buffer bin(sizeof(fftw_complex) * h);
  Buffer bout(sizeof(double) * n);
  auto* din = static_cast<fftw_complex*>(bin.p);
  auto* dout = static_cast<double*>(bout.p);
  std::unique_ptr<Plan> plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = std::make_unique<Plan>(fftw_plan_dft_c2r(static_cast<int>(dims.size()), dims.data(),
                                                    din, dout, FFTW_ESTIMATE));
  }
  std::memcpy(static_cast<void*>(din), in.data(), sizeof(fftw_complex) * h);
  fftw_execute(plan->p);
  return Vec(dout, dout + n);
}

}  // namespace levyheat::fft
