#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "cli_app.hpp"
#include "magcheeger/graph_io.hpp"

using namespace magcheeger;
using nlohmann::json;

namespace {

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() /
           ("magcheeger_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    std::filesystem::create_directories(dir_);
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }

  std::string file(const std::string& name, const std::string& text) {
    const std::string path = (dir_ / name).string();
    cli::write_file(path, text);
    return path;
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  int run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    code_ = cli::run_cli(args, out, err);
    stdout_ = out.str();
    stderr_ = err.str();
    report_ = code_ == 0 && !stdout_.empty() && stdout_.front() == '{' ? json::parse(stdout_) : json();
    return code_;
  }

  std::filesystem::path dir_;
  int code_ = 0;
  std::string stdout_, stderr_;
  json report_;
};

const char* kNegativeTriangle = "s 0 1 1 1/2\ns 1 2 1 1/2\ns 0 2 1 1/2\n";

}  // namespace

TEST_F(Cli, SpectrumSingleEdge) {
  ASSERT_EQ(run({"spectrum", file("e.txt", "e a b 1\n")}), 0);
  const auto& ev = report_["payload"]["eigenvalues"];
  EXPECT_NEAR(ev[0].get<double>(), 0.0, 1e-12);
  EXPECT_NEAR(ev[1].get<double>(), 2.0, 1e-12);
  EXPECT_EQ(report_["command"], "spectrum");
  EXPECT_TRUE(report_["payload"]["within_bounds"].get<bool>());
  EXPECT_EQ(report_["input_digest"].get<std::string>().size(), 16u);
}

TEST_F(Cli, MeasureFlag) {
  const std::string g = file("e.txt", "e 0 1 2\n");
  ASSERT_EQ(run({"spectrum", g}), 0);
  EXPECT_NEAR(report_["payload"]["eigenvalues"][1].get<double>(), 2.0, 1e-12);
  ASSERT_EQ(run({"spectrum", g, "--measure", "unit"}), 0);
  EXPECT_NEAR(report_["payload"]["eigenvalues"][1].get<double>(), 4.0, 1e-12);
  EXPECT_NE(run({"spectrum", g, "--measure", "bogus"}), 0);
}

TEST_F(Cli, SignedFourCycle) {
  ASSERT_EQ(run({"generate", "cycle", "--n", "4", "--flips", "1", "--k", "2", "-o", path("c4.txt")}), 0);
  ASSERT_EQ(run({"spectrum", path("c4.txt")}), 0);
  EXPECT_NEAR(report_["payload"]["eigenvalues"][0].get<double>(), 0.29289321881345254, 1e-10);
}

TEST_F(Cli, BalanceOnTree) {
  ASSERT_EQ(run({"balance", file("t.txt", "s 0 1 1 1/2\ns 1 2 2 1/2\ns 1 3 1 0/2\n")}), 0);
  EXPECT_TRUE(report_["payload"]["balanced"].get<bool>());
  EXPECT_TRUE(report_["payload"]["components"][0]["balanced"].get<bool>());
  ASSERT_EQ(run({"balance", file("tri.txt", kNegativeTriangle)}), 0);
  EXPECT_FALSE(report_["payload"]["balanced"].get<bool>());
  EXPECT_EQ(report_["payload"]["components"][0]["cycle"].size(), 3u);
}

TEST_F(Cli, ConvertDirectedTriangle) {
  const std::string in = file("d.txt", "a 0 1 1\na 1 2 1\na 2 0 1\n");
  ASSERT_EQ(run({"convert", in, "--k", "3", "-o", path("conv.txt")}), 0);
  ASSERT_EQ(run({"spectrum", path("conv.txt")}), 0);
  EXPECT_NEAR(report_["payload"]["eigenvalues"][0].get<double>(), 0.0, 1e-10);
  // Mixed input is not accepted by the analysis commands.
  EXPECT_EQ(run({"spectrum", in}), 1);
  EXPECT_EQ(run({"convert", in, "--k", "1"}), 1);
}

TEST_F(Cli, CheegerExactTriangle) {
  ASSERT_EQ(run({"cheeger-exact", file("tri.txt", kNegativeTriangle), "-n", "1", "--measure", "unit"}), 0);
  EXPECT_NEAR(report_["payload"]["value"].get<double>(), 2.0 / 3.0, 1e-12);
  ASSERT_EQ(run({"cheeger", path("tri.txt"), "-n", "2", "--measure", "unit"}), 0);
  EXPECT_EQ(report_["payload"]["parts"].size(), 2u);
}

TEST_F(Cli, FrustrationCommand) {
  const std::string g = file("tri.txt", kNegativeTriangle);
  ASSERT_EQ(run({"frustration", g}), 0);
  EXPECT_NEAR(report_["payload"]["value"].get<double>(), 2.0, 1e-12);
  EXPECT_TRUE(report_["payload"]["exact"].get<bool>());
  ASSERT_EQ(run({"frustration", g, "--set", "0", "1"}), 0);
  EXPECT_NEAR(report_["payload"]["value"].get<double>(), 0.0, 1e-12);
  EXPECT_NE(run({"frustration", g, "--set", "9"}), 0);
}

TEST_F(Cli, ExitCodes) {
  EXPECT_EQ(run({"spectrum", file("bad.txt", "e 0 1 1\nq 1 2\n")}), 2);
  EXPECT_NE(stderr_.find("line 2"), std::string::npos);
  EXPECT_TRUE(stdout_.empty());
  ASSERT_EQ(run({"generate", "er-signed", "--n", "26", "--p", "0.3", "--k", "2", "-o", path("big.txt")}), 0);
  EXPECT_EQ(run({"cheeger-exact", path("big.txt"), "-n", "2"}), 3);
  EXPECT_EQ(run({"spectrum", path("missing.txt")}), 1);
  EXPECT_EQ(run({"nonsense"}), 1);
  EXPECT_EQ(run({}), 1);
}

TEST_F(Cli, PayloadsAreReproducible) {
  ASSERT_EQ(run({"generate", "er-signed", "--n", "14", "--p", "0.4", "--k", "3", "--seed", "7", "-o", path("g.txt")}),
            0);
  for (const auto& cmd : std::vector<std::vector<std::string>>{
           {"sweep", path("g.txt")},
           {"multiway", path("g.txt"), "-n", "2", "--seed", "3"},
           {"frustration", path("g.txt")},
           {"spectrum", path("g.txt"), "--vectors"}}) {
    ASSERT_EQ(run(cmd), 0);
    const std::string first = report_["payload"].dump();
    auto again = cmd;
    again.insert(again.end(), {"--threads", "2"});
    ASSERT_EQ(run(again), 0);
    EXPECT_EQ(report_["payload"].dump(), first) << cmd[0];
  }
}

TEST_F(Cli, GenerateIsDeterministic) {
  ASSERT_EQ(run({"generate", "er-signed", "--n", "8", "--p", "0.5", "--k", "3", "--seed", "7", "-o", path("a.txt")}),
            0);
  ASSERT_EQ(run({"generate", "er-signed", "--n", "8", "--p", "0.5", "--k", "3", "--seed", "7", "-o", path("b.txt")}),
            0);
  EXPECT_EQ(cli::read_file(path("a.txt")), cli::read_file(path("b.txt")));
  EXPECT_EQ(run({"generate", "bogus"}), 1);
}

TEST_F(Cli, PlantedConvertBalance) {
  ASSERT_EQ(run({"generate", "mixed-planted", "--n", "12", "--k", "3", "--noise", "0", "--seed", "4", "-o",
                 path("m.txt")}),
            0);
  const json truth = json::parse(cli::read_file(path("m.txt") + ".truth.json"));
  EXPECT_EQ(truth["parts"].size(), 3u);
  ASSERT_EQ(run({"convert", path("m.txt"), "--k", "3", "-o", path("s.txt")}), 0);
  ASSERT_EQ(run({"balance", path("s.txt")}), 0);
  EXPECT_TRUE(report_["payload"]["balanced"].get<bool>());
}

TEST_F(Cli, CertificatesRevalidate) {
  ASSERT_EQ(run({"generate", "er-signed", "--n", "16", "--p", "0.3", "--k", "4", "--seed", "2", "-o", path("g.txt")}),
            0);
  const SignedGraph g = parse_signed_graph(cli::read_file(path("g.txt")));
  auto check = [&](const json& c) {
    OrderedKPartition p;
    for (const auto& part : c["candidate"]) {
      VertexSet s;
      for (const auto& name : part) s.push_back(static_cast<VertexId>(std::stoul(name.get<std::string>())));
      p.parts.push_back(make_vertex_set(s));
    }
    EXPECT_LE(c["ratio"].get<double>(), c["bound"].get<double>() + 1e-9);
    const double beta = k_partiteness_ratio(g, g.measure(), p);
    EXPECT_NEAR(beta, c["ratio"].get<double>(), 1e-9);
    const SetFunctionals sf = set_functionals(g, g.measure(), p.base());
    EXPECT_NEAR(sf.boundary, c["boundary"].get<double>(), 1e-9);
    EXPECT_NEAR(sf.volume, c["volume"].get<double>(), 1e-9);
    EXPECT_NEAR((c["frustration"]["value"].get<double>() + sf.boundary) / sf.volume, beta, 1e-9);
  };
  ASSERT_EQ(run({"sweep", path("g.txt"), "--dot", path("g.dot")}), 0);
  check(report_["payload"]["certificate"]);
  EXPECT_TRUE(report_["payload"]["valid"].get<bool>());
  EXPECT_TRUE(std::filesystem::exists(path("g.dot")));
  if (run({"multiway", path("g.txt"), "-n", "2", "--json", path("m.json")}) == 0) {
    for (const auto& c : report_["payload"]["certificates"]) check(c);
    EXPECT_EQ(json::parse(cli::read_file(path("m.json"))), report_);
  } else {
    EXPECT_EQ(code_, 5);
  }
}
