// Drives the built CLI binary end to end: golden table output, exit codes,
// determinism, and the dump/re-import loop.

#include <array>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "yamabe/registry.hpp"

namespace {

int failures = 0;

struct RunResult {
  int status = -1;
  std::string out;
};

RunResult run(const std::string& args) {
  const std::string cmd = std::string(YAMABE_CLI_PATH) + " " + args +
                          " 2>/dev/null";
  RunResult result;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return result;
  std::array<char, 4096> buf;
  size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0)
    result.out.append(buf.data(), n);
  const int rc = pclose(pipe);
  result.status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  return result;
}

void check(bool ok, const std::string& what) {
  if (!ok) {
    ++failures;
    std::printf("cli test failed: %s\n", what.c_str());
  }
}

}  // namespace

int main() {
  const auto table = run("table3 --from 7 --to 15 --format csv");
  check(table.status == 0, "table3 exit status");
  check(table.out.find("7,113.5,65.2\n") != std::string::npos,
        "table3 first row");
  check(table.out.find("9,147.9,91.8\n") != std::string::npos,
        "table3 normalized row");
  check(table.out.find("15,250.6,172.4\n") != std::string::npos,
        "table3 last row");
  check(table.out.find("147.9") != std::string::npos &&
            table.out.find("# note") != std::string::npos,
        "table3 carries the normalization comment");

  // Identical invocations emit identical bytes.
  const auto again = run("table3 --from 7 --to 15 --format csv");
  check(again.out == table.out, "table3 determinism");

  const auto cap = run("cap --m 5 --r 3.14159265");
  check(cap.status == 0, "cap exit status");
  check(cap.out.find("79.0") != std::string::npos, "cap renormalized value");

  const auto bound = run("bound --m 8 --k 5 --format csv");
  check(bound.status == 0, "bound exit status");
  check(bound.out.find("78.7") != std::string::npos, "bound rounded value");

  const auto scan = run("scan --m 7 --k 4 --samples 11");
  check(scan.status == 0, "scan exit status");
  check(scan.out.find("c,bound\n") != std::string::npos, "scan header");

  const auto consistent = run("relations check");
  check(consistent.status == 0, "relations check exit status");
  check(consistent.out.rfind("consistent\n", 0) == 0,
        "relations check verdict");

  const auto contradiction =
      run("relations check --inject 'lambda_spin|7|4|-|upper-strict|65.2'");
  check(contradiction.status == 3, "injected contradiction exit status");
  check(contradiction.out.rfind("contradiction\n", 0) == 0,
        "injected contradiction verdict");

  // Usage errors put nothing on the data stream and exit with 1.
  const auto usage = run("table3 --nonsense");
  check(usage.status == 1, "usage error exit status");
  check(usage.out.empty(), "usage error stdout silence");
  const auto badsub = run("frobnicate");
  check(badsub.status == 1, "unknown subcommand exit status");

  // Dump and re-import: the CLI's bytes parse back to the builtin registry.
  const auto dump = run("registry dump");
  check(dump.status == 0, "registry dump exit status");
  const auto parsed = yamabe::aggregate::from_lines(dump.out);
  check(parsed == yamabe::aggregate::builtin_registry(),
        "registry dump re-imports to the builtin registry");
  check(yamabe::aggregate::to_lines(parsed) == dump.out,
        "registry dump byte-identical re-export");

  if (failures == 0) std::printf("cli tests passed\n");
  return failures == 0 ? 0 : 1;
}
