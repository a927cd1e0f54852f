#include "hopfbif/numeric.hpp"

#include <array>
#include <atomic>
#include <charconv>
#include <exception>
#include <mutex>
#include <thread>

#include "hopfbif/error.hpp"

namespace hopfbif {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::PoleDegenerate: return "pole-degenerate";
    case ErrorKind::InfeasibleGeometry: return "infeasible-geometry";
    case ErrorKind::InfeasibleAmd: return "infeasible-AMD";
    case ErrorKind::IsotropicDegenerate: return "isotropic-degenerate";
    case ErrorKind::SecondKindDegenerate: return "second-kind-degenerate";
    case ErrorKind::SecularFrequencyDegenerate: return "secular-frequency-degenerate";
    case ErrorKind::DegenerateConstant: return "degenerate-constant";
    case ErrorKind::EmptyDomain: return "empty-domain";
    case ErrorKind::EmptyLevel: return "empty-level";
    case ErrorKind::StepFailure: return "step-failure";
    case ErrorKind::LeftDomain: return "left-domain";
    case ErrorKind::Schema: return "schema";
  }
  return "unknown";
}

double bisect(const std::function<double(double)>& f, double lo, double hi, double xtol) {
  double flo = f(lo);
  if (flo == 0.0) return lo;
  double fhi = f(hi);
  if (fhi == 0.0) return hi;
  if ((flo > 0) == (fhi > 0)) {
    throw Error(ErrorKind::InvalidArgument, "bisect: interval does not bracket a root");
  }
  for (int it = 0; it < 200 && std::fabs(hi - lo) > xtol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  if (ec != std::errc{}) return "nan";
  return std::string(buf.data(), ptr);
}

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  if (threads <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) {
          try {
            fn(i);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next = n;
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace hopfbif
