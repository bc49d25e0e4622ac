#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

const std::string kCli = L1CONC_CLI_PATH;
const std::string kDir = L1CONC_TEST_WORKDIR;

int run(const std::string& args) {
  const std::string command = "'" + kCli + "' " + args + " >/dev/null 2>&1";
  const int status = std::system(command.c_str());
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string path(const std::string& name) { return kDir + "/" + name; }

void write(const std::string& name, const std::string& text) { std::ofstream(path(name), std::ios::binary) << text; }

}  // namespace

TEST_CASE("violated bound exits with 10") {
  CHECK(run("falsify --bound agrawal --S 50 --n 10000 --delta 0.05 --trials 10000 --seed 7 --out " +
            path("agrawal.csv")) == 10);
  const auto csv = slurp(path("agrawal.csv"));
  CHECK(csv.find(",Violated,") != std::string::npos);
}

TEST_CASE("consistent bound exits with 0") {
  CHECK(run("falsify --bound weissman-union --S 5 --n 1000 --delta 0.05 --trials 2000 --seed 7") == 0);
  CHECK(run("asymptotic-mean --S 2,10 --trials 1000 --seed 3") == 0);
  CHECK(run("tail --S 3 --n 20 --threshold 'linspace(0,1,5)' --trials 1000 --seed 3") == 0);
  CHECK(run("quantiles --family asymptotic --S 3 --grid 0,0.5,1 --trials 1000 --seed 3") == 0);
}

TEST_CASE("usage and configuration errors exit with 1") {
  CHECK(run("") == 1);
  CHECK(run("falsify --bound agrawal --S 50 --n 100 --delta 0.05") == 1);
  CHECK(run("falsify --bound agrawal --S 50 --n 100 --delta 1.5 --seed 1") == 1);
  CHECK(run("falsify --bound nope --S 50 --n 100 --delta 0.5 --seed 1") == 1);
  CHECK(run("run") == 1);
  CHECK(run("run --config " + path("missing.cfg")) == 1);
  CHECK(run("tail --S 3 --n 5 --threshold 1 --seed 1 --format xml") == 1);
  CHECK(run("asymptotic-mean --S 3 --seed 1 --plot-task nope") == 1);
}

TEST_CASE("capacity errors exit with 2") {
  CHECK(run("tail --S 3 --n 5 --threshold 1 --seed 1 --trials 1e12") == 2);
}

TEST_CASE("outputs are byte-identical across worker counts and re-emission") {
  write("cli.cfg", R"(master_seed = 77
[task]
id = sweep
kind = falsify
bound = weissman-exact
S = 3, 10
n = 100
delta = 0.5, 0.1
trials = 2000
[task]
id = means
kind = asymptotic-mean
S = 2, 10
trials = 2000
)");
  CHECK(run("run --config " + path("cli.cfg") + " --workers 1 --format json --out " + path("w1.json")) == 0);
  CHECK(run("run --config " + path("cli.cfg") + " --workers 4 --format json --out " + path("w4.json")) == 0);
  CHECK(run("run --config " + path("cli.cfg") + " --workers 4 --out " + path("w4.csv")) == 0);
  const auto json = slurp(path("w1.json"));
  CHECK_FALSE(json.empty());
  CHECK(slurp(path("w4.json")) == json);

  CHECK(run("report --in " + path("w1.json") + " --format json --out " + path("re.json")) == 0);
  CHECK(slurp(path("re.json")) == json);
  CHECK(run("report --in " + path("w1.json") + " --out " + path("re.csv")) == 0);
  CHECK(slurp(path("re.csv")) == slurp(path("w4.csv")));

  CHECK(run("report --in " + path("w1.json") + " --plot-task means --out /dev/null --plot-out " + path("m.dat")) == 0);
  CHECK(slurp(path("m.dat")).find("\n# S mean expected\n2 ") != std::string::npos);
  CHECK(run("run --config " + path("cli.cfg") + " --format json --timing --out " + path("t.json")) == 0);
  CHECK(slurp(path("t.json")).find("runtime_seconds") != std::string::npos);
}

TEST_CASE("kind subcommands reject configs of another kind") {
  write("mixed.cfg", "master_seed = 1\n[task]\nkind = asymptotic-mean\nS = 2\ntrials = 10\n");
  CHECK(run("falsify --config " + path("mixed.cfg")) == 1);
  CHECK(run("asymptotic-mean --config " + path("mixed.cfg")) == 0);
}
