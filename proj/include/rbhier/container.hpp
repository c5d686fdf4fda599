// SPDX-License-Identifier: Apache-2.0

#ifndef RBHIER_CONTAINER_HPP
#define RBHIER_CONTAINER_HPP

#include <filesystem>
#include <map>
#include <string>
#include <variant>
#include "rbhier/types.hpp"

namespace rbhier
{

//
// Named-entry binary container used for truth vectors, reduced models, residual data and
// SCM state. Layout (little endian):
//
//   "RBHC" | u32 version | u64 entry count
//   per entry: u32 name length | name bytes | u8 kind | u64 rows | u64 cols | payload
//
// kind 0: real matrix, payload rows*cols f64, column-major
// kind 1: complex matrix, payload rows*cols (re, im) f64 pairs, column-major
// kind 2: UTF-8 text, rows = byte count, cols = 1
//
// Entries are written in name order so equal contents produce identical files.
//
class Container
{
public:
  static constexpr std::uint32_t version = 1;

  void put(const std::string &name, const Matrix &m) { entries_[name] = m; }
  void put(const std::string &name, const RealMatrix &m) { entries_[name] = m; }
  void put_text(const std::string &name, const std::string &text) { entries_[name] = text; }
  void put_scalar(const std::string &name, double v);

  bool has(const std::string &name) const { return entries_.count(name) > 0; }
  const Matrix &complex_matrix(const std::string &name) const;
  const RealMatrix &real_matrix(const std::string &name) const;
  const std::string &text(const std::string &name) const;
  double scalar(const std::string &name) const;

  void save(const std::filesystem::path &path) const;
  static Container load(const std::filesystem::path &path);

private:
  std::map<std::string, std::variant<RealMatrix, Matrix, std::string>> entries_;
};

}  // namespace rbhier

#endif  // RBHIER_CONTAINER_HPP
