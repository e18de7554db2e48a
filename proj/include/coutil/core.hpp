// Copyright 2026 The coutil Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef COUTIL_CORE_HPP_
#define COUTIL_CORE_HPP_

#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

namespace coutil {

// Utility values closer than this are ties.
inline constexpr double kTieTolerance = 1e-9;

// Brute-force enumeration refuses spaces larger than this.
inline constexpr std::size_t kMaxProfiles = 10'000'000;

// Base of all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input: bad labels, incomplete tables, violated constructor
// constraints.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// A protocol and a game do not describe the same agents/strategies/types.
class DomainMismatch : public Error {
 public:
  using Error::Error;
};

// Enumeration space exceeds kMaxProfiles.
class GuardError : public Error {
 public:
  using Error::Error;
};

inline bool approx_equal(double a, double b) {
  return a - b <= kTieTolerance && b - a <= kTieTolerance;
}
inline bool definitely_greater(double a, double b) {
  return a > b + kTieTolerance;
}

// One index per agent, ordered by agent index.
using Profile = std::vector<std::size_t>;

// Mixed-radix enumeration of the Cartesian product of per-agent sets.
// Profiles are ordered lexicographically with agent 0 most significant.
class ProfileSpace {
 public:
  ProfileSpace() = default;

  explicit ProfileSpace(std::vector<std::size_t> radices)
      : radices_(std::move(radices)) {
    size_ = 1;
    for (std::size_t i = 0; i < radices_.size(); ++i) {
      const std::size_t r = radices_[i];
      if (r == 0) {
        throw InvalidArgument("set of agent " + std::to_string(i) +
                              " is empty");
      }
      if (size_ > kMaxProfiles / r) {
        throw GuardError("profile space exceeds " +
                         std::to_string(kMaxProfiles) + " elements");
      }
      size_ *= r;
    }
  }

  std::size_t agents() const { return radices_.size(); }
  std::size_t size() const { return size_; }
  std::size_t radix(std::size_t agent) const { return radices_.at(agent); }
  const std::vector<std::size_t>& radices() const { return radices_; }

  bool contains(std::span<const std::size_t> p) const {
    if (p.size() != radices_.size()) return false;
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (p[i] >= radices_[i]) return false;
    }
    return true;
  }

  std::size_t index(std::span<const std::size_t> p) const {
    if (!contains(p)) throw InvalidArgument("profile outside its space");
    std::size_t idx = 0;
    for (std::size_t i = 0; i < p.size(); ++i) idx = idx * radices_[i] + p[i];
    return idx;
  }

  Profile profile(std::size_t idx) const {
    Profile p(radices_.size());
    for (std::size_t i = radices_.size(); i-- > 0;) {
      p[i] = idx % radices_[i];
      idx /= radices_[i];
    }
    return p;
  }

  // Calls fn(profile) for every profile in lexicographic order. Stops early
  // if fn returns false (when fn returns bool).
  template <typename Fn>
  void for_each(Fn&& fn) const {
    Profile p(radices_.size(), 0);
    for (std::size_t n = 0; n < size_; ++n) {
      if constexpr (std::is_same_v<decltype(fn(p)), bool>) {
        if (!fn(static_cast<const Profile&>(p))) return;
      } else {
        fn(static_cast<const Profile&>(p));
      }
      for (std::size_t i = radices_.size(); i-- > 0;) {
        if (++p[i] < radices_[i]) break;
        p[i] = 0;
      }
    }
  }

  friend bool operator==(const ProfileSpace&, const ProfileSpace&) = default;

 private:
  std::vector<std::size_t> radices_;
  std::size_t size_ = 1;
};

inline std::vector<std::string> labels_of(
    const std::vector<std::vector<std::string>>& sets, const Profile& p) {
  std::vector<std::string> out;
  out.reserve(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) out.push_back(sets.at(i).at(p[i]));
  return out;
}

inline std::vector<std::size_t> radices_of(
    const std::vector<std::vector<std::string>>& sets) {
  std::vector<std::size_t> r;
  r.reserve(sets.size());
  for (const auto& s : sets) r.push_back(s.size());
  return r;
}

}  // namespace coutil

#endif  // COUTIL_CORE_HPP_
