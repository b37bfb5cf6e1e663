#pragma once
// Shared plumbing: error hierarchy, hashing, deterministic parallel loops.

#include <atomic>
#include <cstdint>
#include <functional>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace galkit {

struct Error : std::runtime_error {
  explicit Error(const std::string& m) : std::runtime_error(m) {}
};

#define GALKIT_ERROR_KIND(NAME)                          \
  struct NAME : Error {                                  \
    explicit NAME(const std::string& m)                  \
        : Error(std::string(#NAME) + ": " + m) {}        \
  }

GALKIT_ERROR_KIND(ParseError);
GALKIT_ERROR_KIND(AxiomViolation);
GALKIT_ERROR_KIND(NotNormal);
GALKIT_ERROR_KIND(NotSurjective);
GALKIT_ERROR_KIND(NotCommutative);
GALKIT_ERROR_KIND(NotBCentral);
GALKIT_ERROR_KIND(NotBirkhoffInner);
GALKIT_ERROR_KIND(NotNormalExtension);
GALKIT_ERROR_KIND(AmbientMismatch);
GALKIT_ERROR_KIND(BasisMismatch);
GALKIT_ERROR_KIND(TooLarge);
GALKIT_ERROR_KIND(InternalMismatch);

#undef GALKIT_ERROR_KIND

template <typename... Ts>
std::string cat(const Ts&... parts) {
  std::ostringstream os;
  (os << ... << parts);
  return os.str();
}

inline uint64_t fnv1a64(const void* data, size_t len) {
  const auto* p = static_cast<const unsigned char*>(data);
  uint64_t h = 1469598103934665603ull;
  for (size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 1099511628211ull;
  }
  return h;
}

inline uint64_t fnv1a64(const std::string& s) { return fnv1a64(s.data(), s.size()); }

inline std::string hex64(uint64_t v) {
  static const char* d = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i, v >>= 4) s[i] = d[v & 15];
  return s;
}

// Runs fn(i) for i in [0, count). Work items must be independent; callers that
// aggregate results should write into per-index slots to stay deterministic.
inline void parallel_for(size_t count, unsigned jobs, const std::function<void(size_t)>& fn) {
  if (count == 0) return;
  if (jobs <= 1 || count == 1) {
    for (size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  unsigned workers = std::min<size_t>(jobs, count);
  std::atomic<size_t> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr first_error;
  std::atomic<bool> failed{false};
  std::mutex err_mutex;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        size_t i = next.fetch_add(1);
        if (i >= count || failed.load()) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lk(err_mutex);
          if (!failed.exchange(true)) first_error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failed.load()) std::rethrow_exception(first_error);
}

}  // namespace galkit
