#include "levyheat/common.hpp"

#include <algorithm>
#include <exception>
#include <thread>

namespace levyheat {

namespace {
unsigned g_default_jobs = 0;
}

unsigned default_jobs() {
  if (g_default_jobs != 0) return g_default_jobs;
  return std::max(1u, std::thread::hardware_concurrency());
}

void set_default_jobs(unsigned jobs) { g_default_jobs = jobs; }

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body,
                  unsigned jobs) {
  if (jobs == 0) jobs = default_jobs();
  if (jobs <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(jobs, n));
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < n; i += workers) body(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace levyheat
