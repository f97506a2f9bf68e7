#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace sftlab {

// Deterministic line-oriented key=value report: byte-stable given identical
// inputs and fuel, so runs can be diffed and scripted.
class RunReport {
public:
  explicit RunReport(std::string command) : command_(std::move(command)) {}

  void set(const std::string& key, const std::string& value);
  void set(const std::string& key, std::uint64_t value);
  void set(const std::string& key, int value);

  std::string render() const;

private:
  std::string command_;
  std::vector<std::pair<std::string, std::string>> fields_;
};

// FNV-1a 64-bit over raw bytes; used as the report's inputs digest.
std::uint64_t fnv1a64(const std::string& bytes);
std::string digest_hex(const std::string& bytes);

}  // namespace sftlab
