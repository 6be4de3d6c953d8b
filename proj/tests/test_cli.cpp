#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

std::string cli() { return CLI_PATH; }

int run(const std::string& args) {
  std::string cmd = cli() + " " + args + " > /dev/null 2>&1";
  int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  std::string path;
  TempDir() {
    char tmpl[] = "/tmp/cycledec_cli_XXXXXX";
    path = mkdtemp(tmpl);
  }
  ~TempDir() { std::system(("rm -rf " + path).c_str()); }
  std::string file(const std::string& name) const { return path + "/" + name; }
};

}  // namespace

TEST_CASE("generate, decompose, verify round-trip") {
  TempDir dir;
  std::string g = dir.file("g.el"), cert = dir.file("g.cert");
  // K_9 as a two-cliques family member would not decompose; build a random
  // divisible instance instead via the perturbed generator at size 9
  REQUIRE(run("generate random-min-degree 9 --delta 0.9 --p 1.0 --seed 3 -o " + g) == 0);
  // K_9: the oracle certifies it
  CHECK(run("decompose --input " + g + " --k 2 --seed 1 --cert " + cert) == 0);
  CHECK(run("verify " + g + " " + cert) == 0);
}

TEST_CASE("nonexistence exits with 2") {
  TempDir dir;
  std::string g = dir.file("tc.el");
  REQUIRE(run("generate two-cliques 2 0 -o " + g) == 0);
  CHECK(run("decompose --input " + g + " --k 2 --seed 1") == 2);
}

TEST_CASE("usage and parse errors") {
  TempDir dir;
  CHECK(run("decompose") == 64);              // missing required options
  CHECK(run("nonsense") == 64);               // unknown subcommand
  std::string bad = dir.file("bad.el");
  std::ofstream(bad) << "2 1\n1 0\n";         // u < v violated
  CHECK(run("decompose --input " + bad + " --k 2") == 65);
  CHECK(run("verify " + bad + " " + bad) == 65);
}

TEST_CASE("gadget emission verifies") {
  TempDir dir;
  std::string f = dir.file("f.el"), s = dir.file("f.cert");
  REQUIRE(run("gadget flower --k 4 --count 3 -o " + f + " --schedule " + s) == 0);
  CHECK(run("verify " + f + " " + s) == 0);

  // transformer against a generated cycle host
  std::string h = dir.file("h.el");
  std::ofstream(h) << "8 8\n0 1\n0 7\n1 2\n2 3\n3 4\n4 5\n5 6\n6 7\n";
  std::string t = dir.file("t.el"), sh = dir.file("sh.cert");
  REQUIRE(run("gadget transformer --k 4 --input " + h + " -o " + t +
              " --schedule " + sh) == 0);
  // schedule covers T ∪ H, not T alone: verified through the library in the
  // unit tests; here just check the files materialized
  CHECK(!slurp(t).empty());
  CHECK(!slurp(sh).empty());
}

TEST_CASE("identical seed gives byte-identical outputs") {
  TempDir dir;
  for (std::string cmd : {std::string("generate perturbed-tripartite 18 --noise 0.003 --seed 9 -o "),
                          std::string("generate random-min-degree 40 --delta 0.6 --p 0.5 --seed 4 -o ")}) {
    std::string a = dir.file("a.el"), b = dir.file("b.el");
    REQUIRE(run(cmd + a) == 0);
    REQUIRE(run(cmd + b) == 0);
    CHECK(slurp(a) == slurp(b));
    CHECK_FALSE(slurp(a).empty());
  }
  // decompose twice: certificate and record must match bytewise
  std::string g = dir.file("g.el");
  REQUIRE(run("generate perturbed-tripartite 18 --noise 0.0 --seed 2 -o " + g) == 0);
  std::string c1 = dir.file("c1.cert"), c2 = dir.file("c2.cert");
  std::string r1 = dir.file("r1.json"), r2 = dir.file("r2.json");
  int e1 = run("decompose --input " + g + " --k 2 --seed 5 --cert " + c1 +
               " --record " + r1);
  int e2 = run("decompose --input " + g + " --k 2 --seed 5 --cert " + c2 +
               " --record " + r2);
  CHECK(e1 == e2);
  CHECK(slurp(r1) == slurp(r2));
  if (e1 == 0) CHECK(slurp(c1) == slurp(c2));
}

TEST_CASE("bench emits a sorted csv") {
  TempDir dir;
  std::string csv = dir.file("bench.csv");
  REQUIRE(run("bench --k 2 --n 8..10..1 --delta 70..80..10 --seed 1 -o " + csv) == 0);
  std::string content = slurp(csv);
  CHECK(content.find("# cycledec bench csv v1") == 0);
  CHECK(content.find("k,n,delta_percent") != std::string::npos);
  // 3 n-values x 2 delta-values
  int rows = 0;
  for (char ch : content)
    if (ch == '\n') ++rows;
  CHECK(rows == 2 + 6);

  std::string again = dir.file("bench2.csv");
  REQUIRE(run("bench --k 2 --n 8..10..1 --delta 70..80..10 --seed 1 -o " + again) == 0);
  CHECK(slurp(csv) == slurp(again));
}

TEST_CASE("classify reports the structured record") {
  TempDir dir;
  std::string g = dir.file("bip.el");
  REQUIRE(run("generate perturbed-bipartite 40 --noise 0.0 --seed 6 -o " + g) == 0);
  std::string out = dir.file("out.txt");
  std::string cmd = cli() + " classify --input " + g + " --exact > " + out + " 2>/dev/null";
  REQUIRE(WEXITSTATUS(std::system(cmd.c_str())) == 0);
  std::string text = slurp(out);
  CHECK(text.find("kind: close_bipartite") != std::string::npos);
  CHECK(text.find("exact: yes") != std::string::npos);
}
