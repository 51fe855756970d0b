#pragma once

#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace ergopt {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Symbol out of range for the alphabet, empty period, malformed word text.
class InvalidWord : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

// Enumeration or table size larger than the configured budget.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

class AlphabetMismatch : public Error {
 public:
  using Error::Error;
};

class GridError : public Error {
 public:
  using Error::Error;
};

// R < -tol somewhere; `where` names the offending word or grid index.
class InvalidSubaction : public Error {
 public:
  InvalidSubaction(const std::string& what, std::string where)
      : Error(what), where_(std::move(where)) {}
  const std::string& where() const noexcept { return where_; }

 private:
  std::string where_;
};

class NonConvergence : public Error {
 public:
  NonConvergence(const std::string& what, std::size_t iterations, double last_increment)
      : Error(what), iterations_(iterations), last_increment_(last_increment) {}
  std::size_t iterations() const noexcept { return iterations_; }
  double last_increment() const noexcept { return last_increment_; }

 private:
  std::size_t iterations_;
  double last_increment_;
};

// Default enumeration budget: 2^20 entries. ERGOPT_BUDGET overrides it.
inline std::uint64_t enumeration_budget() {
  constexpr std::uint64_t kDefault = std::uint64_t{1} << 20;
  if (const char* env = std::getenv("ERGOPT_BUDGET")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return v;
  }
  return kDefault;
}

// Returns d^k or throws once it passes `budget`.
inline std::uint64_t checked_power(std::uint64_t d, std::uint64_t k, std::uint64_t budget,
                                   const char* what) {
  std::uint64_t result = 1;
  for (std::uint64_t i = 0; i < k; ++i) {
    if (result > budget / d) {
      throw BudgetExceeded(std::string(what) + ": " + std::to_string(d) + "^" +
                           std::to_string(k) + " exceeds budget " + std::to_string(budget));
    }
    result *= d;
  }
  if (result > budget) throw BudgetExceeded(std::string(what) + ": size exceeds budget");
  return result;
}

}  // namespace ergopt
