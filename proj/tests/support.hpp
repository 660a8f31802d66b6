#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <unistd.h>

#include "deptype/deptype.hpp"

namespace testing_support {

// Scratch directory removed on scope exit.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("deptype_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline void spit(const std::filesystem::path& p, const std::string& body) {
  std::ofstream out(p, std::ios::binary);
  out << body;
}

inline std::map<deptype::DepressionClass, int> per_class(int n) {
  std::map<deptype::DepressionClass, int> m;
  for (auto c : deptype::kAllClasses) m[c] = n;
  return m;
}

inline std::vector<deptype::LabeledExample> synthetic(int n_per_class, std::uint64_t seed = 42) {
  return deptype::generate_synthetic_corpus(per_class(n_per_class), deptype::default_lexicons(),
                                            deptype::default_noise_vocab(), seed);
}

}  // namespace testing_support
