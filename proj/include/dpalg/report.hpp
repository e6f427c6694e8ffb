/// @file report.hpp
/// @brief Law-by-law verification reports shared by the randomized checkers.
#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

namespace dpalg {

struct LawCheck {
  std::string law;
  bool passed = true;
  std::size_t instances = 0;
  std::optional<std::string> counterexample;
};

/// Ordered list of named laws; each keeps the first counterexample seen.
class Report {
 public:
  /// Records one instance of `law`. The first failure's description is kept.
  template <class Describe>
  void record(const std::string& law, bool ok, Describe&& describe) {
    LawCheck& c = entry(law);
    ++c.instances;
    if (!ok && c.passed) {
      c.passed = false;
      c.counterexample = describe();
    }
  }
  void record(const std::string& law, bool ok) {
    record(law, ok, [] { return std::string{}; });
  }

  /// Ensures `law` is listed even if no instance was exercised.
  LawCheck& entry(const std::string& law) {
    auto it = std::find_if(checks_.begin(), checks_.end(), [&](const LawCheck& c) { return c.law == law; });
    if (it != checks_.end()) return *it;
    checks_.push_back(LawCheck{law, true, 0, std::nullopt});
    return checks_.back();
  }

  void merge(const Report& other, const std::string& prefix = {}) {
    for (const auto& c : other.checks_) {
      LawCheck& mine = entry(prefix + c.law);
      mine.instances += c.instances;
      if (!c.passed && mine.passed) {
        mine.passed = false;
        mine.counterexample = c.counterexample;
      }
    }
  }

  bool ok() const {
    return std::all_of(checks_.begin(), checks_.end(), [](const LawCheck& c) { return c.passed; });
  }

  const LawCheck* find(const std::string& law) const {
    auto it = std::find_if(checks_.begin(), checks_.end(), [&](const LawCheck& c) { return c.law == law; });
    return it == checks_.end() ? nullptr : &*it;
  }

  bool passed(const std::string& law) const {
    const LawCheck* c = find(law);
    return c != nullptr && c->passed;
  }

  const std::vector<LawCheck>& checks() const { return checks_; }

 private:
  std::vector<LawCheck> checks_;
};

}  // namespace dpalg
