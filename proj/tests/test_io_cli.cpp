#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "test_helpers.hpp"
#include "unmix/cli.hpp"
#include "unmix/matrix_io.hpp"
#include "unmix/solvers.hpp"

using namespace unmix;
namespace fs = std::filesystem;

namespace {

fs::path temp_path(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "unmix_io_tests";
  fs::create_directories(dir);
  return dir / name;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

struct CoutCapture {
  std::ostringstream text;
  std::streambuf* saved;
  CoutCapture() : saved(std::cout.rdbuf(text.rdbuf())) {}
  ~CoutCapture() { std::cout.rdbuf(saved); }
};

}  // namespace

TEST_CASE("format_value handles specials and precision") {
  CHECK(format_value(std::numeric_limits<double>::infinity(), 6) == "inf");
  CHECK(format_value(-std::numeric_limits<double>::infinity(), 6) == "-inf");
  CHECK(format_value(std::numeric_limits<double>::quiet_NaN(), 6) == "nan");
  CHECK(format_value(0.1234567890123, 6) == "0.123457");
  CHECK(format_value(2.0, 17) == "2");
}

TEST_CASE("matrix and vector text round trips are exact") {
  Rng rng(71);
  const Matrix a = test_helpers::random_matrix(rng, 5, 7);
  const auto path = temp_path("roundtrip_matrix.txt");
  write_matrix_file(path.string(), a);
  CHECK(read_matrix_file(path.string()) == a);

  const Vector v = test_helpers::random_vector(rng, 9);
  const auto vpath = temp_path("roundtrip_vector.txt");
  write_vector_file(vpath.string(), v);
  CHECK(read_vector_file(vpath.string()) == v);
}

TEST_CASE("matrix reader rejects malformed input") {
  std::istringstream bad_header("x y\n1 2\n");
  CHECK_THROWS_AS(read_matrix(bad_header), std::runtime_error);
  std::istringstream truncated("2 2\n1 2\n3\n");
  CHECK_THROWS_AS(read_matrix(truncated), std::runtime_error);
  std::istringstream nonfinite("1 2\n1 inf\n");
  CHECK_THROWS_AS(read_matrix(nonfinite), std::runtime_error);
  CHECK_THROWS_AS(read_matrix_file("/nonexistent/file.txt"), std::runtime_error);
}

TEST_CASE("csv writer emits config echo, header and rows") {
  const auto path = temp_path("report.csv");
  {
    CsvWriter csv(path.string(), "demo --x 1", {"a", "b"});
    csv.row({"1", CsvWriter::cell(0.123456789)});
    CHECK_THROWS_AS(csv.row({"only-one"}), std::logic_error);
  }
  const std::string text = read_file(path);
  CHECK(text == "# config: demo --x 1\na,b\n1,0.123457\n");
}

TEST_CASE("parse_beta accepts positives and the infinite sentinel") {
  CHECK(!cli::parse_beta("2.5").finite() == false);
  CHECK(cli::parse_beta("2.5").value() == 2.5);
  CHECK(!cli::parse_beta("inf").finite());
  CHECK(!cli::parse_beta("infinite").finite());
  CHECK_THROWS_AS(cli::parse_beta("0"), std::invalid_argument);
  CHECK_THROWS_AS(cli::parse_beta("-1"), std::invalid_argument);
  CHECK_THROWS_AS(cli::parse_beta("abc"), std::invalid_argument);
  CHECK_THROWS_AS(cli::parse_beta("1.5x"), std::invalid_argument);

  const auto list = cli::parse_beta_list("0.1,1,10,inf");
  REQUIRE(list.size() == 4);
  CHECK(list[0].value() == 0.1);
  CHECK(!list[3].finite());
}

TEST_CASE("parse_index_list and parse_grid") {
  const auto idx = cli::parse_index_list("0,3,7");
  CHECK(idx == std::vector<Index>{0, 3, 7});
  CHECK_THROWS_AS(cli::parse_index_list("1,-2"), std::invalid_argument);
  CHECK_THROWS_AS(cli::parse_index_list("1,two"), std::invalid_argument);

  const auto grid = cli::parse_grid("0.0002,1.25,51");
  const auto values = grid.values();
  REQUIRE(values.size() == 51);
  CHECK(values[0] == doctest::Approx(0.0002));
  CHECK(values[1] == doctest::Approx(0.0002 * 1.25));
  CHECK(values[50] == doctest::Approx(0.0002 * std::pow(1.25, 50)));
  CHECK_THROWS_AS(cli::parse_grid("1,2"), std::invalid_argument);
  CHECK_THROWS_AS(cli::parse_grid("0,2,3"), std::invalid_argument);
  CHECK_THROWS_AS(cli::parse_grid("1,2,0"), std::invalid_argument);
}

TEST_CASE("cli certify maps the support flags and reports the identity certificate") {
  const auto mpath = temp_path("identity.txt");
  write_matrix_file(mpath.string(), Matrix::Identity(8, 8));

  CoutCapture capture;
  const int status = cli::run({"certify", "--matrix", mpath.string(), "--beta", "inf",
                               "--support", "0,3,7", "--c", "3", "--d", "1"});
  REQUIRE(status == 0);
  const std::string out = capture.text.str();
  CHECK(out.find("support=0,3,7\n") != std::string::npos);
  CHECK(out.find("beta=inf\n") != std::string::npos);
  CHECK(out.find("condition_value=0\n") != std::string::npos);
  CHECK(out.find("satisfiable=true\n") != std::string::npos);
  CHECK(out.find("cd_bound=2\n") != std::string::npos);
  CHECK(out.find("alpha_lo=1\n") != std::string::npos);
  CHECK(out.find("alpha_hi=2\n") != std::string::npos);
}

TEST_CASE("cli usage errors exit with status 2") {
  CoutCapture capture;
  CHECK(cli::run({"solve", "--beta", "0"}) == 2);                  // missing required flags
  CHECK(cli::run({"certify", "--matrix", "x", "--beta", "0", "--support", "0"}) == 2);
  CHECK(cli::run({"no-such-command"}) == 2);
  CHECK(cli::run({}) == 2);
}

TEST_CASE("cli solve writes solution vectors in the text format") {
  const auto mpath = temp_path("solve_matrix.txt");
  const auto dpath = temp_path("solve_data.txt");
  const auto upath = temp_path("solve_u.txt");
  const auto vpath = temp_path("solve_v.txt");
  write_matrix_file(mpath.string(), Matrix::Identity(4, 4));
  Vector y(4);
  y << 3.0, -0.2, 1.8, -2.6;
  write_vector_file(dpath.string(), y);

  CoutCapture capture;
  const int status = cli::run({"solve", "--matrix", mpath.string(), "--data", dpath.string(),
                               "--alpha", "0.5", "--beta", "1", "--mode", "reduced", "--tol",
                               "1e-13", "--max-iters", "200000", "--out-u", upath.string(),
                               "--out-v", vpath.string()});
  REQUIRE(status == 0);
  const Vector u = read_vector_file(upath.string());
  const Vector v = read_vector_file(vpath.string());
  const Vector u_expected = soft_threshold(y.array(), 1.0).matrix();
  CHECK((u - u_expected).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((v - (y - u_expected) / 2.0).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(capture.text.str().find("support=0,2,3\n") != std::string::npos);
}

TEST_CASE("cli certify exits 1 when the condition fails") {
  Rng rng(72);
  Matrix a = test_helpers::random_matrix(rng, 4, 8);
  a.col(5) = a.col(1);  // make the pair {1,5} singular
  const auto mpath = temp_path("failing.txt");
  write_matrix_file(mpath.string(), a);
  CoutCapture capture;
  const int status =
      cli::run({"certify", "--matrix", mpath.string(), "--beta", "inf", "--support", "1,5"});
  CHECK(status == 1);
  CHECK(capture.text.str().find("satisfiable=false\n") != std::string::npos);
}

TEST_CASE("cli gen-matrix output matches the library ensemble stream") {
  const auto path = temp_path("gen.txt");
  CoutCapture capture;
  REQUIRE(cli::run({"gen-matrix", "--m", "6", "--n", "9", "--seed", "123", "--index", "2",
                    "--out", path.string()}) == 0);
  const EnsembleSpec spec{6, 9, 3, 0.0, 123};
  CHECK(read_matrix_file(path.string()) == gaussian_matrix(spec, 2));
}

TEST_CASE("cli region prints the summary and samples the boundary") {
  const auto mpath = temp_path("region_id.txt");
  const auto cpath = temp_path("region_curve.csv");
  write_matrix_file(mpath.string(), Matrix::Identity(7, 7));
  CoutCapture capture;
  const int status = cli::run({"region", "--matrix", mpath.string(), "--beta", "1", "--k", "2",
                               "--theta-samples", cpath.string(), "--theta-count", "5"});
  REQUIRE(status == 0);
  const std::string out = capture.text.str();
  CHECK(out.find("r_value=2\n") != std::string::npos);
  CHECK(out.find("sigma_value=2\n") != std::string::npos);
  CHECK(out.find("theta_min=0.5\n") != std::string::npos);
  CHECK(out.find("failure_fraction=0\n") != std::string::npos);

  const std::string curve = read_file(cpath);
  CHECK(curve.find("theta,theta_max\n") != std::string::npos);
  CHECK(curve.find("\n2,0.5\n") != std::string::npos);  // boundary value at theta = R
}

TEST_CASE("cli mc-conditions runs are byte-identical for identical flags") {
  const auto path_a = temp_path("mc_a.csv");
  const auto path_b = temp_path("mc_b.csv");
  const std::vector<std::string> base{"mc-conditions", "--m",    "8",  "--n",      "12",
                                      "--k",           "2",      "--betas", "1,inf", "--matrices",
                                      "2",             "--seed", "5"};
  auto with_out = [&](const std::string& p) {
    auto args = base;
    args.push_back("--out");
    args.push_back(p);
    return args;
  };
  REQUIRE(cli::run(with_out(path_a.string())) == 0);
  REQUIRE(cli::run(with_out(path_b.string())) == 0);
  CHECK(read_file(path_a) == read_file(path_b));
  CHECK(read_file(path_a).find("# config: mc-conditions") == 0);
  CHECK(read_file(path_a).find("beta,matrix,failure_fraction\n") != std::string::npos);
}

TEST_CASE("cli gen-signal respects constraints and prints the support") {
  const auto upath = temp_path("sig_u.txt");
  const auto vpath = temp_path("sig_v.txt");
  CoutCapture capture;
  REQUIRE(cli::run({"gen-signal", "--n", "15", "--k", "3", "--c", "1.5", "--d", "0.3", "--seed",
                    "9", "--out-u", upath.string(), "--out-v", vpath.string()}) == 0);
  const Vector u = read_vector_file(upath.string());
  const Vector v = read_vector_file(vpath.string());
  CHECK(support(u).size() == 3);
  CHECK(v.cwiseAbs().maxCoeff() == 0.3);
  CHECK(capture.text.str().find("support=") == 0);
}
