// gaugechain_cli: batch runner for the numerical experiments.
//
//   gaugechain_cli <subcommand> --config run.json [--seed N] [--out DIR] [--threads N] [--svg]
//
// Exit status: 0 on success, 2 on a configuration error, 3 on a numerical failure.

#include <chrono>
#include <cstdint>
#include <exception>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include "CLI11.hpp"

#include "gaugechain/runner/commands.hpp"

namespace {

using namespace gaugechain;
using namespace gaugechain::runner;

constexpr int exit_config = 2;
constexpr int exit_numerical = 3;

using Command = std::function<RunManifest(const ExperimentConfig&, OutputDir&, const RunOptions&)>;

} // namespace

int main(int argc, char** argv)
{
	CLI::App app{"Disordered non-reciprocal resonator chains: spectra, Lyapunov exponents and envelopes"};
	app.require_subcommand(1);
	app.set_version_flag("--version", std::string{tool_version});

	std::string config_path;
	std::optional<std::uint64_t> seed;
	std::string out_dir = "out";
	unsigned threads = 1;
	bool svg = false;

	const std::map<std::string, std::pair<std::string, Command>> commands{
	    {"spectrum", {"eigenvalues, CDF samples and region labels", cmd_spectrum}},
	    {"lyapunov-grid", {"total Lyapunov exponent on a complex grid, L = 0 contours, winding curves", cmd_lyapunov_grid}},
	    {"envelope", {"eigenvector envelopes over a p_monomer / gamma sweep", cmd_envelope}},
	    {"critical-gamma", {"critical imaginary gauge potential", cmd_critical_gamma}},
	    {"dos-convergence", {"Kolmogorov distances between empirical CDFs", cmd_dos_convergence}},
	    {"winding", {"block winding curves from quasiperiodic eigenvalues", cmd_winding}},
	};

	for (const auto& [name, entry] : commands) {
		auto* sub = app.add_subcommand(name, entry.first);
		sub->add_option("--config", config_path, "experiment config (JSON)")->required();
		sub->add_option("--seed", seed, "override the config seed");
		sub->add_option("--out", out_dir, "output directory")->capture_default_str();
		sub->add_option("--threads", threads, "worker threads")->capture_default_str()->check(CLI::PositiveNumber);
		sub->add_flag("--svg", svg, "also write SVG plots");
	}

	try {
		app.parse(argc, argv);
	} catch (const CLI::ParseError& e) {
		const int code = app.exit(e);
		return code == 0 ? 0 : exit_config;
	}

	const std::string name = app.get_subcommands().front()->get_name();
	const auto t0 = std::chrono::steady_clock::now();
	try {
		auto cfg = load_config(config_path);
		if (seed) {
			cfg.seed = *seed;
			cfg.source["seed"] = *seed;
		}
		OutputDir out{out_dir};
		auto manifest = commands.at(name).second(cfg, out, RunOptions{threads, svg});
		manifest.wall_clock_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
		manifest.files.push_back("manifest.json");
		std::ofstream(out.root() / "manifest.json") << manifest.to_json().dump(2) << '\n';

		if (name == "critical-gamma")
			std::cout << "gamma_c = " << format_number(manifest.results["gamma_c"].get<double>()) << '\n';
		std::cout << "wrote " << manifest.files.size() << " files to " << out.root().string() << '\n';
		return 0;
	} catch (const ConfigError& e) {
		std::cerr << "config error: " << e.what() << '\n';
		return exit_config;
	} catch (const std::invalid_argument& e) {
		std::cerr << "invalid input: " << e.what() << '\n';
		return exit_config;
	} catch (const NumericalError& e) {
		std::cerr << "numerical failure: " << e.what() << '\n';
		return exit_numerical;
	} catch (const std::domain_error& e) {
		std::cerr << "numerical failure: " << e.what() << '\n';
		return exit_numerical;
	} catch (const std::exception& e) {
		std::cerr << "error: " << e.what() << '\n';
		return exit_numerical;
	}
}
