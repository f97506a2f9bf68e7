#include "sftlab/report.hpp"

#include <sstream>

namespace sftlab {

void RunReport::set(const std::string& key, const std::string& value) {
  fields_.emplace_back(key, value);
}

void RunReport::set(const std::string& key, std::uint64_t value) {
  fields_.emplace_back(key, std::to_string(value));
}

void RunReport::set(const std::string& key, int value) {
  fields_.emplace_back(key, std::to_string(value));
}

std::string RunReport::render() const {
  std::ostringstream os;
  os << "command=" << command_ << "\n";
  for (const auto& [k, v] : fields_) os << k << '=' << v << "\n";
  return os.str();
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string digest_hex(const std::string& bytes) {
  std::uint64_t h = fnv1a64(bytes);
  static const char* hex = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = hex[h & 0xf];
    h >>= 4;
  }
  return out;
}

}  // namespace sftlab
