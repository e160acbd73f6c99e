#pragma once

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace testsupport {

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Run a shell command capturing stdout/stderr through temp files.
inline RunResult run(const std::string& cmd, const std::string& tag) {
  const std::string out_path = "/tmp/moo_test_" + tag + ".out";
  const std::string err_path = "/tmp/moo_test_" + tag + ".err";
  const std::string full = cmd + " > " + out_path + " 2> " + err_path;
  const int rc = std::system(full.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  r.out = slurp(out_path);
  r.err = slurp(err_path);
  return r;
}

}  // namespace testsupport
