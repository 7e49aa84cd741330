#include "pmeround/cli.hpp"

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pmeround/game.hpp"
#include "pmeround/io.hpp"
#include "pmeround/noise.hpp"
#include "pmeround/rounding.hpp"
#include "pmeround/sweep.hpp"

namespace pmeround {

namespace {

void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty())
    std::cout << text;
  else
    write_file(out_path, text);
}

RMat product_distribution(const RVec& nu) {
  const int n = static_cast<int>(nu.size());
  RMat tilde(n, n);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) tilde(x, y) = nu(x) * nu(y);
  return tilde;
}

DecompositionReport full_report(const NonlocalGame& g, const RoundResult& rr) {
  DecompositionReport rep;
  rep.decomposition = rr.decomposition;
  rep.per_step_values = rr.step_values;
  rep.mixture_value = rr.mixture_value;
  rep.epsilon = rr.epsilon;
  rep.self_consistency = rr.self_consistency;
  RVec nu_x = marginal_x(g.nu);
  rep.l1_gap = mixture_correlation(rr.decomposition, rr.symmetrized.as_strategy(),
                                   product_distribution(nu_x))
                   .l1_gap;
  return rep;
}

struct VerifySummary {
  Real completeness = 0.0;
  Real min_eigenvalue = 0.0;
  Real projectivity = 0.0;
};

VerifySummary summarize(const MeasurementFamily& f) {
  VerifySummary s;
  s.min_eigenvalue = 1.0;
  for (const auto& m : f.measurements) {
    MeasurementDiagnostics d = validate(m);
    s.completeness = std::max(s.completeness, d.completeness_defect);
    s.projectivity = std::max(s.projectivity, d.projectivity_defect);
    for (Real e : d.min_eigenvalues) s.min_eigenvalue = std::min(s.min_eigenvalue, e);
  }
  return s;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"almost-synchronous strategy rounding laboratory"};
  app.require_subcommand(1);
  app.fallthrough();

  std::uint64_t seed = 0;
  Real tolerance = 1e-8;
  std::string out_path;
  app.add_option("--seed", seed, "random seed recorded in reports");
  app.add_option("--tolerance", tolerance, "acceptance threshold used by verify");
  app.add_option("--out", out_path, "output file (default: stdout)");

  // analyze
  auto* analyze = app.add_subcommand("analyze", "evaluate a strategy against a game");
  std::string an_game, an_strategy;
  analyze->add_option("--game", an_game, "game JSON file")->required();
  analyze->add_option("--strategy", an_strategy, "strategy JSON file")->required();

  // round
  auto* round = app.add_subcommand("round", "decompose a strategy into PME steps");
  std::string rd_strategy, rd_game, rd_builtin, rd_noise = "depolarize_state", rd_nu;
  Real rd_level = 0.0;
  round->add_option("--strategy", rd_strategy, "strategy JSON file");
  round->add_option("--game", rd_game, "game JSON file (projection rounding)");
  round->add_option("--builtin", rd_builtin, "builtin game name (chsh | magic_square)");
  round->add_option("--noise", rd_noise, "noise kind for --builtin");
  round->add_option("--level", rd_level, "noise level for --builtin");
  round->add_option("--nu", rd_nu,
                    "question distribution for plain decomposition (uniform | diag)")
      ->check(CLI::IsMember({"uniform", "diag"}));

  // verify
  auto* verify = app.add_subcommand("verify", "run the invariant suite on a strategy");
  std::string vf_strategy, vf_game;
  verify->add_option("--strategy", vf_strategy, "strategy JSON file")->required();
  verify->add_option("--game", vf_game, "game JSON file for label checks");

  // generate
  auto* generate_cmd = app.add_subcommand("generate", "emit a (noisy) builtin strategy");
  std::string gn_builtin, gn_noise = "depolarize_state", gn_game_out;
  Real gn_level = 0.0;
  generate_cmd->add_option("--builtin", gn_builtin, "builtin game name")->required();
  generate_cmd->add_option("--noise", gn_noise, "noise kind");
  generate_cmd->add_option("--level", gn_level, "noise level");
  generate_cmd->add_option("--game-out", gn_game_out, "also write the game tables here");

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "noise sweep with exponent fits");
  std::string sw_builtin, sw_noise = "depolarize_state";
  std::vector<Real> sw_levels;
  sweep_cmd->add_option("--builtin", sw_builtin, "builtin game name")->required();
  sweep_cmd->add_option("--noise", sw_noise, "noise kind");
  sweep_cmd->add_option("--levels", sw_levels, "descending noise levels")
      ->required()
      ->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (*analyze) {
      NonlocalGame g = game_from_json(read_file(an_game));
      Strategy s = align_strategy_with_game(strategy_from_json(read_file(an_strategy)), g);
      emit(out_path, game_report_to_json(analyze_game(g, s), seed));
      return 0;
    }

    if (*round) {
      if (!rd_builtin.empty()) {
        NoiseModel model{noise_kind_from_string(rd_noise), rd_level, seed};
        Strategy s = generate(rd_builtin, model);
        BuiltinGame bg = builtin_game(rd_builtin);
        emit(out_path,
             decomposition_report_to_json(full_report(bg.game, projection_round(bg.game, s)),
                                          seed));
        return 0;
      }
      if (rd_strategy.empty())
        fail(ErrorCode::InvalidArgument, "round needs --builtin or --strategy");
      Strategy s = strategy_from_json(read_file(rd_strategy));
      if (!rd_game.empty() && rd_nu.empty()) {
        NonlocalGame g = game_from_json(read_file(rd_game));
        Strategy aligned = align_strategy_with_game(s, g);
        emit(out_path,
             decomposition_report_to_json(full_report(g, projection_round(g, aligned)), seed));
        return 0;
      }
      if (rd_nu.empty())
        fail(ErrorCode::InvalidArgument, "round needs --game or --nu");
      RVec nu;
      if (rd_nu == "uniform") {
        nu = RVec::Constant(s.alice.size(), 1.0 / s.alice.size());
      } else {  // diag: diagonal of a supplied game's question distribution
        if (rd_game.empty())
          fail(ErrorCode::InvalidArgument, "--nu diag needs --game");
        NonlocalGame g = game_from_json(read_file(rd_game));
        s = align_strategy_with_game(s, g);
        nu = diag_distribution(g.nu);
      }
      SymmetricStrategy sym = symmetrize_side(s, Subsystem::A);
      DecompositionReport rep;
      rep.decomposition = pme_decompose(sym, nu);
      emit(out_path, decomposition_report_to_json(rep, seed));
      return 0;
    }

    if (*verify) {
      Strategy s = strategy_from_json(read_file(vf_strategy));
      bool label_ok = true;
      bool has_game = !vf_game.empty();
      if (has_game) {
        NonlocalGame g = game_from_json(read_file(vf_game));
        try {
          s = align_strategy_with_game(s, g);
        } catch (const Error&) {
          label_ok = false;
        }
      }
      Real norm_defect = std::abs(s.state.amplitudes.norm() - 1.0);
      VerifySummary alice = summarize(s.alice);
      VerifySummary bob = summarize(s.bob);
      bool valid = label_ok && norm_defect <= tolerance &&
                   alice.completeness <= tolerance && bob.completeness <= tolerance &&
                   alice.min_eigenvalue >= -tolerance && bob.min_eigenvalue >= -tolerance;
      std::string out;
      out += "{\"valid\":";
      out += valid ? "true" : "false";
      out += ",\"state_norm_defect\":";
      out += format_real(norm_defect);
      out += ",\"alice\":{\"completeness_defect\":";
      out += format_real(alice.completeness);
      out += ",\"min_eigenvalue\":";
      out += format_real(alice.min_eigenvalue);
      out += ",\"projectivity_defect\":";
      out += format_real(alice.projectivity);
      out += "},\"bob\":{\"completeness_defect\":";
      out += format_real(bob.completeness);
      out += ",\"min_eigenvalue\":";
      out += format_real(bob.min_eigenvalue);
      out += ",\"projectivity_defect\":";
      out += format_real(bob.projectivity);
      out += '}';
      if (has_game) {
        out += ",\"labels_match\":";
        out += label_ok ? "true" : "false";
      }
      out += ",\"tolerance\":";
      out += format_real(tolerance);
      out += "}\n";
      emit(out_path, out);
      return valid ? 0 : 1;
    }

    if (*generate_cmd) {
      NoiseModel model{noise_kind_from_string(gn_noise), gn_level, seed};
      Strategy s = generate(gn_builtin, model);
      if (!gn_game_out.empty()) write_file(gn_game_out, game_to_json(builtin_game(gn_builtin).game));
      emit(out_path, strategy_to_json(s));
      return 0;
    }

    if (*sweep_cmd) {
      SweepConfig config;
      config.builtin_name = sw_builtin;
      config.noise = noise_kind_from_string(sw_noise);
      config.seed = seed;
      config.levels = sw_levels;
      emit(out_path, sweep_to_csv(run_sweep(config)));
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace pmeround
