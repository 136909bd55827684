// Command-line front end: radial ball sharpness checks, single-domain
// verification from SGLMESH files, and corpus runs. Exit codes: 0 success,
// 1 verdict failure, 2 input or eligibility error.

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "sgl/harness.hpp"

int main(int argc, char** argv) {
  CLI::App app{
      "Eigenvalue-gap comparison toolkit: checks the curvature-weighted "
      "bound gap(Omega) <= (sn_K(d)/sn_k(d))^(2n-2) * gap(comparison ball) "
      "on radial balls, meshed domains, and corpus files."};
  app.require_subcommand(1);

  int ball_n = 2;
  double ball_k = 0.0, ball_R = 1.0;
  CLI::App* ball = app.add_subcommand(
      "verify-ball",
      "sharpness of the bound on the geodesic R-ball in N(k), dimension n");
  ball->add_option("--n", ball_n, "space dimension (>= 2)")->required();
  ball->add_option("--k", ball_k, "constant curvature of the model space")
      ->required();
  ball->add_option("--R", ball_R, "geodesic radius (> 0)")->required();

  std::string mesh_path, out_path;
  double alpha = 1.0, K_lower = 0.0;
  CLI::App* domain = app.add_subcommand(
      "verify-domain", "full pipeline on an SGLMESH file; CSV row to stdout");
  domain->add_option("--mesh", mesh_path, "SGLMESH file path")->required();
  domain->add_option("--alpha", alpha, "weak isoperimetric constant in (0,1]")
      ->required();
  domain
      ->add_option("--K", K_lower,
                   "ambient curvature lower bound (the window is [K, chart "
                   "curvature])")
      ->required();
  domain->add_option("--out", out_path, "also write the CSV to this file");

  std::string config_path;
  int jobs = 1;
  CLI::App* corpus = app.add_subcommand(
      "corpus", "run every corpus entry; CSV plus a summary table to stdout");
  corpus
      ->add_option("--config", config_path,
                   "corpus config file (flat key = value entries)")
      ->required();
  corpus->add_option("--jobs", jobs, "worker threads (default 1)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? sgl::exit_success : sgl::exit_input_error;
  }

  sgl::Tolerances tol;
  try {
    tol = sgl::load_tolerances();
  } catch (const std::exception& ex) {
    std::cerr << ex.what() << "\n";
    return sgl::exit_input_error;
  }

  if (ball->parsed())
    return sgl::cmd_verify_ball(ball_n, ball_k, ball_R, tol, std::cout,
                                std::cerr);
  if (domain->parsed())
    return sgl::cmd_verify_domain(mesh_path, alpha, K_lower, out_path, tol,
                                  std::cout, std::cerr);
  return sgl::cmd_corpus(config_path, jobs, tol, std::cout, std::cerr);
}
