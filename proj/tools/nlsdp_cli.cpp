// Copyright 2026 The nlsdp authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line solver. Reads a problem in one of the supported input
// formats, runs the penalty/barrier method and writes a line-oriented
// report to stdout or --output.
//
// Exit codes: 0 the solver converged, 1 it ran but failed to converge,
// 2 the input could not be read.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "nlsdp/apps/corr.hpp"
#include "nlsdp/frontends/bmi.hpp"
#include "nlsdp/frontends/json_input.hpp"
#include "nlsdp/frontends/pmi.hpp"
#include "nlsdp/frontends/sdpa.hpp"
#include "nlsdp/outer_loop.hpp"
#include "nlsdp/report.hpp"

namespace {

int verbosity_from_env() {
  const char* v = std::getenv("NLSDP_VERBOSE");
  if (!v || !*v) return 0;
  return std::max(0, std::atoi(v));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nlsdp: nonlinear semidefinite programming solver"};

  std::string format;
  std::string input_path;
  std::string output_path;
  double corr_kappa = 10.0;
  nlsdp::OuterOptions opts;

  app.add_option("--format", format, "input format")
      ->required()
      ->check(CLI::IsMember({"sdpa", "bmi", "pmi", "corr"}));
  app.add_option("input", input_path, "input file")->required();
  app.add_option("--kappa", corr_kappa,
                 "condition-number bound (corr format only)");
  app.add_option("--epsilon", opts.epsilon, "stopping tolerance");
  app.add_option("--pi-init", opts.pi_init, "initial scalar-penalty scaling");
  app.add_option("--Pi-init", opts.Pi_init,
                 "initial matrix-penalty asymptote");
  app.add_option("--penalty-factor", opts.penalty_factor,
                 "shrink factor for both penalty parameters");
  app.add_option("--mu", opts.mult_restrict_mu,
                 "multiplier update restriction");
  app.add_option("--max-outer", opts.max_outer, "outer iteration limit");
  app.add_option("-o,--output", output_path, "write the report here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  const int verbose = verbosity_from_env();
  if (verbose > 0) {
    opts.log = [](const std::string& line) { std::cerr << line << '\n'; };
    opts.log_inner = verbose > 1;
  }

  nlsdp::Problem problem;
  try {
    std::ifstream in(input_path);
    if (!in.good())
      throw std::runtime_error("cannot open '" + input_path + "'");
    if (format == "sdpa") {
      problem = nlsdp::sdp_define(nlsdp::read_sdpa(in));
    } else if (format == "bmi") {
      problem = nlsdp::bmi_define(nlsdp::read_bmi_json(in));
    } else if (format == "pmi") {
      problem = nlsdp::pmi_define(nlsdp::read_pmi_json(in));
    } else {
      problem = nlsdp::corr_define(nlsdp::read_corr_matrix(in), corr_kappa);
    }
    const auto diags = nlsdp::validate(problem);
    if (!diags.empty())
      throw std::runtime_error(diags.front().field + ": " +
                               diags.front().message);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }

  nlsdp::SolveResult res;
  try {
    res = nlsdp::solve(problem, opts);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }

  nlsdp::Report rep = nlsdp::make_report(res, problem);
  if (format == "corr") {
    const nlsdp::CorrSolution sol = nlsdp::corr_recover(res.point);
    rep.vectors.emplace_back("zeta",
                             nlsdp::Vector::Constant(1, sol.zeta));
    rep.matrices.emplace_back("X", sol.X);
  }

  if (output_path.empty()) {
    nlsdp::write_report(std::cout, rep);
  } else {
    std::ofstream out(output_path);
    if (!out.good()) {
      std::cerr << "error: cannot write '" << output_path << "'\n";
      return 2;
    }
    nlsdp::write_report(out, rep);
  }

  std::cerr << "status: " << rep.status << " objective: " << rep.objective
            << " outer: " << rep.outer_iters << '\n';
  return res.report.status == nlsdp::SolveStatus::kConverged ? 0 : 1;
}
