// Copyright (c) 2026 The skillstack Authors
// Use of this source code is governed by the Apache-2.0 license, see LICENSE
#pragma once

// Thin typed accessors over toml++ that report errors as ConfigError with a
// dotted key path.

#include <array>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#define TOML_EXCEPTIONS 1
#include <toml.hpp>

#include "skillstack/arm_model.hpp"

namespace skillstack::detail {

inline std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError(path.string(), "", "cannot open file");
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline toml::table parse_toml(std::string_view text, const std::string& source) {
  try {
    return toml::parse(text, source);
  } catch (const toml::parse_error& e) {
    std::ostringstream msg;
    msg << "line " << e.source().begin.line << ": " << e.description();
    throw ConfigError(source, "", msg.str());
  }
}

class TomlReader {
 public:
  TomlReader(const toml::table& root, const std::string& key, std::string source)
      : source_(std::move(source)), path_(key) {
    const toml::node* n = root.get(key);
    if (n == nullptr || !n->is_table()) {
      throw ConfigError(source_, path_, "missing table");
    }
    table_ = n->as_table();
  }
  TomlReader(const toml::table* table, std::string path, std::string source)
      : source_(std::move(source)), path_(std::move(path)), table_(table) {}

  const std::string& path() const { return path_; }
  const std::string& source() const { return source_; }

  bool has(const std::string& key) const { return table_->contains(key); }

  [[noreturn]] void fail(const std::string& key, const std::string& what) const {
    throw ConfigError(source_, full(key), what);
  }

  std::string full(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  double number(const std::string& key) const {
    const toml::node* n = table_->get(key);
    if (n == nullptr) fail(key, "missing");
    return as_number(*n, key);
  }

  double number_or(const std::string& key, double fallback) const {
    return has(key) ? number(key) : fallback;
  }

  long long integer(const std::string& key) const {
    const toml::node* n = table_->get(key);
    if (n == nullptr) fail(key, "missing");
    if (auto v = n->value<long long>(); v && n->is_integer()) return *v;
    fail(key, "expected integer");
  }

  long long integer_or(const std::string& key, long long fallback) const {
    return has(key) ? integer(key) : fallback;
  }

  bool boolean_or(const std::string& key, bool fallback) const {
    const toml::node* n = table_->get(key);
    if (n == nullptr) return fallback;
    if (!n->is_boolean()) fail(key, "expected boolean");
    return *n->value<bool>();
  }

  std::string string(const std::string& key) const {
    const toml::node* n = table_->get(key);
    if (n == nullptr) fail(key, "missing");
    if (!n->is_string()) fail(key, "expected string");
    return *n->value<std::string>();
  }

  std::string string_or(const std::string& key, const std::string& fallback) const {
    return has(key) ? string(key) : fallback;
  }

  std::vector<double> numbers(const std::string& key) const {
    const toml::node* n = table_->get(key);
    if (n == nullptr) fail(key, "missing");
    const toml::array* arr = n->as_array();
    if (arr == nullptr) fail(key, "expected array of numbers");
    std::vector<double> out;
    out.reserve(arr->size());
    for (std::size_t i = 0; i < arr->size(); ++i) {
      out.push_back(as_number(*arr->get(i), key + "[" + std::to_string(i) + "]"));
    }
    return out;
  }

  template <std::size_t N>
  std::array<double, N> fixed(const std::string& key) const {
    const std::vector<double> v = numbers(key);
    if (v.size() != N) {
      fail(key, "expected " + std::to_string(N) + " numbers, got " + std::to_string(v.size()));
    }
    std::array<double, N> out{};
    std::copy(v.begin(), v.end(), out.begin());
    return out;
  }

  JointVector joint_vector(const std::string& key) const {
    const auto a = fixed<kNumJoints>(key);
    return Eigen::Map<const JointVector>(a.data());
  }

  Vector6 vector6(const std::string& key) const {
    const auto a = fixed<6>(key);
    return Eigen::Map<const Vector6>(a.data());
  }

  Eigen::Vector3d vector3(const std::string& key) const {
    const auto a = fixed<3>(key);
    return Eigen::Vector3d(a[0], a[1], a[2]);
  }

  TomlReader table(const std::string& key) const {
    const toml::node* n = table_->get(key);
    if (n == nullptr || !n->is_table()) fail(key, "expected table");
    return TomlReader(n->as_table(), full(key), source_);
  }

  std::vector<TomlReader> tables(const std::string& key) const {
    std::vector<TomlReader> out;
    const toml::node* n = table_->get(key);
    if (n == nullptr) return out;
    const toml::array* arr = n->as_array();
    if (arr == nullptr) fail(key, "expected array of tables");
    for (std::size_t i = 0; i < arr->size(); ++i) {
      const toml::node* e = arr->get(i);
      if (!e->is_table()) fail(key, "expected array of tables");
      out.emplace_back(e->as_table(), full(key) + "[" + std::to_string(i) + "]", source_);
    }
    return out;
  }

 private:
  double as_number(const toml::node& n, const std::string& key) const {
    if (n.is_floating_point()) return *n.value<double>();
    if (n.is_integer()) return static_cast<double>(*n.value<long long>());
    fail(key, "expected number");
  }

  std::string source_;
  std::string path_;
  const toml::table* table_ = nullptr;
};

}  // namespace skillstack::detail
