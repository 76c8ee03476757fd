#ifndef BPDG_ERRORS_HPP_
#define BPDG_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace bpdg {

/// A state outside the admissible set where one is required. Carries the
/// cell and, once known, the time step at which it happened.
class AdmissibilityError : public std::runtime_error {
 public:
  AdmissibilityError(const std::string &what, int i = -1, int j = -1)
      : std::runtime_error(what), i_(i), j_(j), what_(describe(what, i, j, -1)) {}

  int cell_i() const noexcept { return i_; }
  int cell_j() const noexcept { return j_; }
  long step() const noexcept { return step_; }

  void set_step(long step) {
    step_ = step;
    what_ = describe(std::runtime_error::what(), i_, j_, step_);
  }

  const char *what() const noexcept override { return what_.c_str(); }

 private:
  static std::string describe(const std::string &msg, int i, int j, long step) {
    std::string s = msg;
    if (i >= 0) s += " at cell (" + std::to_string(i) + ", " + std::to_string(j) + ")";
    if (step >= 0) s += " in step " + std::to_string(step);
    return s;
  }

  int i_, j_;
  long step_{-1};
  std::string what_;
};

/// Bad run configuration; line is 0 when no file line applies.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string &what, int line = 0)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what
                                    : what),
        line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

}  // namespace bpdg

#endif  // BPDG_ERRORS_HPP_
