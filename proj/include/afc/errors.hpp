#ifndef AFC_ERRORS_HPP
#define AFC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace afc {

struct AngleNearPiError : std::runtime_error {
  explicit AngleNearPiError(const std::string& what) : std::runtime_error(what) {}
};

struct NotSymmetricError : std::runtime_error {
  explicit NotSymmetricError(const std::string& what) : std::runtime_error(what) {}
};

struct NonFiniteError : std::runtime_error {
  explicit NonFiniteError(const std::string& what) : std::runtime_error(what) {}
};

struct NotHurwitzError : std::runtime_error {
  explicit NotHurwitzError(const std::string& what) : std::runtime_error(what) {}
};

struct SingularSystemError : std::runtime_error {
  explicit SingularSystemError(const std::string& what) : std::runtime_error(what) {}
};

struct InfeasibleError : std::runtime_error {
  explicit InfeasibleError(const std::string& what) : std::runtime_error(what) {}
};

struct MaxIterationsError : std::runtime_error {
  explicit MaxIterationsError(const std::string& what) : std::runtime_error(what) {}
};

// Scenario/config parsing failure. line == 0 means "not tied to a line".
struct ConfigError : std::runtime_error {
  int line;
  ConfigError(int line_no, const std::string& what)
      : std::runtime_error(line_no > 0 ? "line " + std::to_string(line_no) + ": " + what
                                       : what),
        line(line_no) {}
};

struct SimulationDivergedError : std::runtime_error {
  long last_valid_record;
  SimulationDivergedError(long last_record, const std::string& what)
      : std::runtime_error(what), last_valid_record(last_record) {}
};

struct IoError : std::runtime_error {
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace afc

#endif  // AFC_ERRORS_HPP
