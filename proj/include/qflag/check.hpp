#pragma once

#include <chrono>
#include <string>

namespace qflag {

enum class Status { Pass, Fail, Skipped, Measured };

inline const char* status_name(Status s) {
  switch (s) {
    case Status::Pass:
      return "pass";
    case Status::Fail:
      return "fail";
    case Status::Skipped:
      return "skipped";
    case Status::Measured:
      return "measured";
  }
  return "fail";
}

/// One verification record.
struct Check {
  std::string name;
  Status status = Status::Pass;
  std::string lhs;
  std::string rhs;
  std::string detail;
  std::string certificate;
  double wall_ms = 0;

  bool passed() const { return status == Status::Pass; }
};

inline Check make_check(std::string name, bool ok, std::string lhs = {}, std::string rhs = {}) {
  Check c;
  c.name = std::move(name);
  c.status = ok ? Status::Pass : Status::Fail;
  c.lhs = std::move(lhs);
  c.rhs = std::move(rhs);
  return c;
}

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace qflag
