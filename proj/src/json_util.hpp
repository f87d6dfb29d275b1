// Copyright 2026 The shieldsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Strict readers over parsed JSON config sections.

#ifndef SHIELDSIM_SRC_JSON_UTIL_HPP_
#define SHIELDSIM_SRC_JSON_UTIL_HPP_

#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <string_view>

#include "json.hpp"

namespace shieldsim::internal {

using Json = nlohmann::json;

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses `text`, reporting syntax errors as "<source>:<line>:<col>: ...".
inline Json ParseJson(std::string_view text, std::string_view source) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    std::size_t line = 1;
    std::size_t col = 1;
    const std::size_t end = std::min<std::size_t>(e.byte, text.size());
    for (std::size_t i = 0; i + 1 < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ConfigError(std::string(source) + ":" + std::to_string(line) + ":" +
                      std::to_string(col) + ": JSON syntax error: " + e.what());
  }
}

/// Reads optional members of one JSON object, rejecting unknown keys.
class Section {
 public:
  Section(const Json& obj, std::string path, std::string_view source)
      : obj_(obj), path_(std::move(path)), source_(source) {
    if (!obj_.is_object()) Fail(path_, "expected an object");
  }

  void AllowOnly(std::initializer_list<std::string_view> keys) const {
    for (const auto& [key, value] : obj_.items()) {
      bool known = false;
      for (std::string_view k : keys) known = known || key == k;
      if (!known) Fail(Join(key), "unknown key");
    }
  }

  bool Has(std::string_view key) const { return obj_.contains(std::string(key)); }

  Section Child(std::string_view key) const {
    return Section(obj_.at(std::string(key)), Join(key), source_);
  }

  void Read(std::string_view key, double& out) const {
    if (const Json* v = Find(key)) {
      if (!v->is_number()) Fail(Join(key), "expected a number");
      out = v->get<double>();
    }
  }
  void Read(std::string_view key, int& out) const {
    if (const Json* v = Find(key)) {
      if (!v->is_number_integer()) Fail(Join(key), "expected an integer");
      out = v->get<int>();
    }
  }
  void Read(std::string_view key, std::uint64_t& out) const {
    if (const Json* v = Find(key)) {
      if (!v->is_number_unsigned()) Fail(Join(key), "expected an unsigned 64-bit integer");
      out = v->get<std::uint64_t>();
    }
  }
  void Read(std::string_view key, std::string& out) const {
    if (const Json* v = Find(key)) {
      if (!v->is_string()) Fail(Join(key), "expected a string");
      out = v->get<std::string>();
    }
  }

  const Json& json() const { return obj_; }
  const std::string& path() const { return path_; }

  [[noreturn]] void Fail(const std::string& path, const std::string& what) const {
    throw ConfigError(std::string(source_) + ": " + (path.empty() ? "<root>" : path) + ": " +
                      what);
  }

  std::string Join(std::string_view key) const {
    return path_.empty() ? std::string(key) : path_ + "." + std::string(key);
  }

 private:
  const Json* Find(std::string_view key) const {
    const auto it = obj_.find(std::string(key));
    return it == obj_.end() ? nullptr : &*it;
  }

  const Json& obj_;
  std::string path_;
  std::string source_;
};

}  // namespace shieldsim::internal

#endif  // SHIELDSIM_SRC_JSON_UTIL_HPP_
