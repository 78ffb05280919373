#ifndef TORSIONFORGE_REPORT_HPP
#define TORSIONFORGE_REPORT_HPP

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace torsionforge {

/// One quantitative check inside a report: explicit expected/got pair and a
/// verdict. The envelope exit status is nonzero iff any check fails.
struct Check {
  std::string name;
  nlohmann::json expected;
  nlohmann::json got;
  bool pass = false;
};

class ReportEnvelope {
public:
  explicit ReportEnvelope(std::string command) : command_(std::move(command)) {}

  void set_input(const nlohmann::json& j) { inputs_digest_ = digest(j.dump()); }
  void set_input_text(const std::string& s) { inputs_digest_ = digest(s); }

  nlohmann::json& results() { return results_; }

  void check(const std::string& name, nlohmann::json expected, nlohmann::json got) {
    Check c;
    c.name = name;
    c.pass = (expected == got);
    c.expected = std::move(expected);
    c.got = std::move(got);
    checks_.push_back(std::move(c));
  }

  void check_near(const std::string& name, double expected, double got, double tol) {
    Check c;
    c.name = name;
    c.pass = std::abs(expected - got) <= tol;
    c.expected = expected;
    c.got = got;
    checks_.push_back(std::move(c));
  }

  void check_below(const std::string& name, double got, double bound) {
    Check c;
    c.name = name;
    c.pass = got < bound;
    c.expected = std::string("< ") + nlohmann::json(bound).dump();
    c.got = got;
    checks_.push_back(std::move(c));
  }

  bool all_pass() const {
    for (const auto& c : checks_)
      if (!c.pass) return false;
    return true;
  }

  int exit_code() const { return all_pass() ? 0 : 1; }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["command"] = command_;
    j["inputs"] = inputs_digest_;
    j["results"] = results_;
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& c : checks_) {
      nlohmann::json cj;
      cj["name"] = c.name;
      cj["expected"] = c.expected;
      cj["got"] = c.got;
      cj["pass"] = c.pass;
      checks.push_back(cj);
    }
    j["checks"] = checks;
    j["pass"] = all_pass();
    return j;
  }

  const std::vector<Check>& checks() const { return checks_; }

  /// FNV-1a digest of the canonical input serialization.
  static std::string digest(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
  }

private:
  std::string command_;
  std::string inputs_digest_ = "0000000000000000";
  nlohmann::json results_;
  std::vector<Check> checks_;
};

}  // namespace torsionforge

#endif
