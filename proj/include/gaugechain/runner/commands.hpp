#pragma once

// The batch subcommands.  Each one reads an ExperimentConfig, writes its
// tables into an OutputDir and returns a manifest without timing filled in.

#include <cstdint>
#include <string>
#include <vector>

#include "gaugechain/gaugechain.hpp"
#include "gaugechain/runner/config.hpp"
#include "gaugechain/runner/io.hpp"

namespace gaugechain::runner {

inline constexpr const char* tool_version = "1.0.0";

struct RunOptions {
	unsigned threads = 1;
	bool svg = false;
};

namespace detail {

inline RunManifest start_manifest(const std::string& command, const ExperimentConfig& cfg)
{
	RunManifest m;
	m.tool_version = tool_version;
	m.command = command;
	m.config = cfg.source;
	m.config_hash = config_hash(cfg.source);
	m.seeds = cfg.seeds();
	return m;
}

inline std::string trial_name(const std::string& stem, std::size_t t, const std::string& ext)
{
	return stem + "_t" + std::to_string(t) + ext;
}

inline std::int64_t as_int(std::size_t n) { return static_cast<std::int64_t>(n); }

inline const char* palette(std::size_t i)
{
	static constexpr const char* colours[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
	return colours[i % 6];
}

} // namespace detail

inline RunManifest cmd_spectrum(const ExperimentConfig& cfg, OutputDir& out, const RunOptions& opts = {})
{
	using namespace detail;
	auto manifest = start_manifest("spectrum", cfg);
	const auto grid = cfg.spectrum.lambda_grid.points();
	const auto seeds = cfg.seeds();
	const std::size_t M = cfg.blocks();

	std::vector<SpectralData> results(seeds.size());
	std::vector<std::size_t> sizes(seeds.size());
	std::vector<std::string> chains(seeds.size());
	parallel_for(seeds.size(), opts.threads, [&](std::size_t t) {
		const auto chain = sample_chain(cfg.library, M, seeds[t]);
		sizes[t] = chain.N();
		chains[t] = chain_to_json(chain).dump(1) + "\n";
		results[t] = spectrum(chain, {.vectors = cfg.spectrum.vectors, .lambda_max = std::nullopt});
	});

	SvgPlot plot{"empirical CDF", "lambda", "D(lambda)", {}};
	manifest.results["trials"] = nlohmann::json::array();
	for (std::size_t t = 0; t < seeds.size(); ++t) {
		const auto& sd = results[t];
		CsvTable ev({"index", "eigenvalue"});
		for (std::size_t k = 0; k < sd.size(); ++k) ev.add({as_int(k), sd.eigenvalues[k]});
		out.save(trial_name("eigenvalues", t, ".csv"), ev);
		out.save_text(trial_name("chain", t, ".json"), chains[t]);

		const EmpiricalCDF cdf{sd.eigenvalues};
		CsvTable ct({"lambda", "cdf"});
		SvgSeries line{{}, palette(t)};
		for (double l : grid) {
			ct.add({l, cdf(l)});
			line.points.emplace_back(l, cdf(l));
		}
		out.save(trial_name("cdf", t, ".csv"), ct);
		plot.series.push_back(std::move(line));

		if (cfg.spectrum.vectors) {
			CsvTable vt({"mode", "eigenvalue", "site", "sign", "log10_abs"});
			for (std::size_t k = 0; k < sd.size(); ++k) {
				const auto& u = sd.gauge[k];
				for (std::size_t j = 0; j < u.size(); ++j)
					vt.add({as_int(k), sd.eigenvalues[k], as_int(j), static_cast<std::int64_t>(u.sign[j]),
					        u.logmag[j] / std::log(10.0)});
			}
			out.save(trial_name("eigenvectors", t, ".csv"), vt);
		}
		manifest.results["trials"].push_back({{"N", sizes[t]}, {"eigenvalues", sd.size()}});
	}

	std::vector<std::string> header{"lambda", "region", "saxon_hutner"};
	for (const auto& b : cfg.library.blocks()) header.push_back("trace_" + b.name);
	CsvTable rt(header);
	for (double l : grid) {
		const auto label = classify(cfg.library.blocks(), l);
		std::vector<Cell> row{l, std::string{to_string(label.region)},
		                      static_cast<std::int64_t>(saxon_hutner(cfg.library.blocks(), l) ? 1 : 0)};
		for (double tr : label.traces) row.emplace_back(tr);
		rt.add(std::move(row));
	}
	out.save("regions.csv", rt);
	if (opts.svg) out.save_text("cdf.svg", plot.render());
	manifest.files = out.files();
	return manifest;
}

inline RunManifest cmd_winding(const ExperimentConfig& cfg, OutputDir& out, const RunOptions& opts = {})
{
	using namespace detail;
	auto manifest = start_manifest("winding", cfg);
	const auto& blocks = cfg.library.blocks();
	std::vector<WindingCurve> curves(blocks.size());
	parallel_for(blocks.size(), opts.threads,
	             [&](std::size_t d) { curves[d] = winding_curve(blocks[d], cfg.winding.theta_samples); });

	CsvTable bands({"block", "band", "theta", "re", "im"});
	CsvTable loops({"block", "loop", "vertex", "re", "im"});
	SvgPlot plot{"block winding curves", "Re lambda", "Im lambda", {}};
	manifest.results["blocks"] = nlohmann::json::array();
	for (std::size_t d = 0; d < blocks.size(); ++d) {
		const auto& c = curves[d];
		for (std::size_t b = 0; b < c.bands.size(); ++b)
			for (std::size_t t = 0; t < c.theta.size(); ++t)
				bands.add({blocks[d].name, as_int(b), c.theta[t], c.bands[b][t].real(), c.bands[b][t].imag()});
		for (std::size_t l = 0; l < c.loops.size(); ++l) {
			for (std::size_t v = 0; v < c.loops[l].size(); ++v)
				loops.add({blocks[d].name, as_int(l), as_int(v), c.loops[l][v].real(), c.loops[l][v].imag()});
			plot.series.push_back({c.loops[l], palette(d), false, true});
		}
		manifest.results["blocks"].push_back({{"name", blocks[d].name}, {"loops", c.loops.size()}, {"length", curve_length(c)}});
	}
	out.save("winding_bands.csv", bands);
	out.save("winding_loops.csv", loops);
	if (opts.svg) out.save_text("winding.svg", plot.render());
	manifest.files = out.files();
	return manifest;
}

inline RunManifest cmd_lyapunov_grid(const ExperimentConfig& cfg, OutputDir& out, const RunOptions& opts = {})
{
	using namespace detail;
	auto manifest = start_manifest("lyapunov-grid", cfg);
	const auto& sec = cfg.lyapunov_grid;
	const auto& blocks = cfg.library.blocks();
	const auto seeds = cfg.seeds();
	const std::size_t M = cfg.blocks();

	std::vector<WindingCurve> curves(blocks.size());
	parallel_for(blocks.size(), opts.threads, [&](std::size_t d) { curves[d] = winding_curve(blocks[d], sec.theta_samples); });
	CsvTable wt({"block", "loop", "vertex", "re", "im"});
	for (std::size_t d = 0; d < blocks.size(); ++d)
		for (std::size_t l = 0; l < curves[d].loops.size(); ++l)
			for (std::size_t v = 0; v < curves[d].loops[l].size(); ++v)
				wt.add({blocks[d].name, as_int(l), as_int(v), curves[d].loops[l][v].real(), curves[d].loops[l][v].imag()});
	out.save("winding_loops.csv", wt);

	std::vector<double> estimate;
	if (sec.estimate) {
		estimate = evaluate_grid(sec.re, sec.im, sec.nx, sec.ny, opts.threads,
		                         [&](cdouble z) { return lyapunov_estimate(cfg.library, z); })
		               .values;
	}

	manifest.results["trials"] = nlohmann::json::array();
	for (std::size_t t = 0; t < seeds.size(); ++t) {
		const auto chain = sample_chain(cfg.library, M, seeds[t]);
		const auto grid = lyapunov_grid(chain, sec.re, sec.im, sec.nx, sec.ny, opts.threads);
		const double decay = chain.decay();

		std::vector<std::string> header{"re", "im", "L", "Lsym"};
		if (sec.estimate) {
			header.emplace_back("estimate");
			header.emplace_back("abs_error");
		}
		CsvTable gt(header);
		for (std::size_t iy = 0; iy < grid.ny(); ++iy)
			for (std::size_t ix = 0; ix < grid.nx(); ++ix) {
				const double L = grid.value(ix, iy);
				std::vector<Cell> row{grid.re[ix], grid.im[iy], L, L + decay};
				if (sec.estimate) {
					const double e = estimate[iy * grid.nx() + ix];
					row.emplace_back(e);
					row.emplace_back(std::abs(L - e));
				}
				gt.add(std::move(row));
			}
		out.save(trial_name("lyapunov_grid", t, ".csv"), gt);

		const auto contours = marching_squares(grid);
		CsvTable ct({"line", "closed", "vertex", "re", "im"});
		for (std::size_t l = 0; l < contours.lines.size(); ++l)
			for (std::size_t v = 0; v < contours.lines[l].points.size(); ++v)
				ct.add({as_int(l), static_cast<std::int64_t>(contours.lines[l].closed), as_int(v),
				        contours.lines[l].points[v].real(), contours.lines[l].points[v].imag()});
		out.save(trial_name("contour", t, ".csv"), ct);

		const auto ev = spectrum(chain, {.vectors = false, .lambda_max = std::nullopt}).eigenvalues;
		CsvTable et({"index", "eigenvalue", "region", "L"});
		std::vector<double> Ls(ev.size());
		parallel_for(ev.size(), opts.threads, [&](std::size_t k) { Ls[k] = total_lyapunov(chain, ev[k]).L; });
		for (std::size_t k = 0; k < ev.size(); ++k)
			et.add({as_int(k), ev[k], std::string{to_string(classify(blocks, ev[k]).region)}, Ls[k]});
		out.save(trial_name("eigenvalues", t, ".csv"), et);

		if (opts.svg) {
			SvgPlot plot{"L = 0 contour, winding curves, eigenvalues", "Re lambda", "Im lambda", {}};
			for (const auto& line : contours.lines) plot.series.push_back({line.points, "#000000", false, line.closed});
			for (std::size_t d = 0; d < blocks.size(); ++d)
				for (const auto& loop : curves[d].loops) plot.series.push_back({loop, palette(d + 1), false, true});
			SvgSeries dots{{}, "#d62728", true};
			for (double e : ev) dots.points.emplace_back(e, 0.0);
			plot.series.push_back(std::move(dots));
			out.save_text(trial_name("lyapunov", t, ".svg"), plot.render());
		}
		manifest.results["trials"].push_back(
		    {{"N", chain.N()}, {"contour_lines", contours.lines.size()}, {"vertex_tolerance", contours.vertex_tolerance}});
	}
	manifest.files = out.files();
	return manifest;
}

inline CriticalGamma run_critical_gamma(const ExperimentConfig& cfg, const BlockLibrary& library, unsigned threads)
{
	const auto seeds = cfg.seeds();
	CriticalGammaOptions o;
	o.gamma_ref = cfg.critical_gamma.gamma_ref;
	o.exact = cfg.critical_gamma.exact;
	o.threads = threads;
	return critical_gamma(library, cfg.critical_gamma.lambda_cut, cfg.blocks_for(library), seeds, o);
}

inline RunManifest cmd_critical_gamma(const ExperimentConfig& cfg, OutputDir& out, const RunOptions& opts = {})
{
	using namespace detail;
	auto manifest = start_manifest("critical-gamma", cfg);
	const auto res = run_critical_gamma(cfg, cfg.library, opts.threads);

	CsvTable lt({"trial", "eigenvalue", "Lsym"});
	for (std::size_t t = 0; t < res.per_seed.size(); ++t)
		for (std::size_t k = 0; k < res.per_seed[t].eigenvalues.size(); ++k)
			lt.add({as_int(t), res.per_seed[t].eigenvalues[k], res.per_seed[t].Lsym[k]});
	out.save("critical_gamma_lsym.csv", lt);

	CsvTable st({"gamma_c", "mean_max_Lsym", "mean_decay_per_gamma", "gamma_ref", "lambda_cut", "exact"});
	st.add({res.gamma_c, res.mean_max_Lsym, res.mean_decay_per_gamma, cfg.critical_gamma.gamma_ref,
	        cfg.critical_gamma.lambda_cut, static_cast<std::int64_t>(cfg.critical_gamma.exact)});
	out.save("critical_gamma.csv", st);

	if (opts.svg) {
		SvgPlot plot{"Lsym at eigenvalues below the cut", "lambda", "Lsym", {}};
		for (std::size_t t = 0; t < res.per_seed.size(); ++t) {
			SvgSeries s{{}, palette(t), true};
			for (std::size_t k = 0; k < res.per_seed[t].eigenvalues.size(); ++k)
				s.points.emplace_back(res.per_seed[t].eigenvalues[k], res.per_seed[t].Lsym[k]);
			plot.series.push_back(std::move(s));
		}
		out.save_text("critical_gamma.svg", plot.render());
	}
	manifest.results = {{"gamma_c", res.gamma_c}, {"mean_max_Lsym", res.mean_max_Lsym},
	                    {"mean_decay_per_gamma", res.mean_decay_per_gamma}};
	manifest.files = out.files();
	return manifest;
}

inline RunManifest cmd_envelope(const ExperimentConfig& cfg, OutputDir& out, const RunOptions& opts = {})
{
	using namespace detail;
	auto manifest = start_manifest("envelope", cfg);
	const auto& sec = cfg.envelope;
	const auto seeds = cfg.seeds();

	struct Case {
		double p_monomer;
		double gamma;
		BlockLibrary library;
	};
	std::vector<Case> cases;
	auto library_for = [&](double pm, double g) {
		if (cfg.standard_gamma) return standard_blocks(g, pm);
		return sec.gamma.empty() ? cfg.library : cfg.library.with_uniform_gamma(g);
	};
	const double own_pm = cfg.library.probabilities().front();
	const std::vector<double> pms = sec.p_monomer.empty() ? std::vector<double>{own_pm} : sec.p_monomer;
	std::vector<double> gammas = sec.gamma;
	if (gammas.empty()) gammas.push_back(cfg.standard_gamma ? *cfg.standard_gamma : std::nan(""));

	manifest.results["critical_gamma"] = nlohmann::json::array();
	for (double pm : pms) {
		for (double g : gammas) cases.push_back({pm, g, library_for(pm, std::isnan(g) ? 0.0 : g)});
		if (!sec.critical_offsets.empty()) {
			const double gc = run_critical_gamma(cfg, standard_blocks(cfg.critical_gamma.gamma_ref, pm), opts.threads).gamma_c;
			manifest.results["critical_gamma"].push_back({{"p_monomer", pm}, {"gamma_c", gc}});
			for (double off : sec.critical_offsets) cases.push_back({pm, gc + off, standard_blocks(gc + off, pm)});
		}
	}

	const std::size_t items = cases.size() * seeds.size();
	std::vector<Envelope> envs(items);
	parallel_for(items, opts.threads, [&](std::size_t k) {
		const auto& c = cases[k / seeds.size()];
		envs[k] = envelope(sample_chain(c.library, cfg.blocks_for(c.library), seeds[k % seeds.size()]), sec.lambda_cut);
	});

	CsvTable et({"p_monomer", "gamma", "trial", "site", "log10_envelope"});
	CsvTable st({"p_monomer", "gamma", "trial", "N", "modes", "right_half_median"});
	SvgPlot plot{"eigenvector envelopes", "site", "log10 envelope", {}};
	for (std::size_t k = 0; k < items; ++k) {
		const auto& c = cases[k / seeds.size()];
		const auto t = k % seeds.size();
		const auto& e = envs[k];
		for (std::size_t j = 0; j < e.size(); ++j) et.add({c.p_monomer, c.gamma, as_int(t), as_int(j), e.log10_values[j]});
		st.add({c.p_monomer, c.gamma, as_int(t), as_int(e.size()), as_int(e.modes), e.right_half_median()});
		if (t == 0) {
			SvgSeries s{{}, palette(k / seeds.size())};
			for (std::size_t j = 0; j < e.size(); ++j) s.points.emplace_back(static_cast<double>(j), e.log10_values[j]);
			plot.series.push_back(std::move(s));
		}
	}
	out.save("envelope.csv", et);
	out.save("envelope_summary.csv", st);
	if (opts.svg) out.save_text("envelope.svg", plot.render());
	manifest.files = out.files();
	return manifest;
}

inline RunManifest cmd_dos_convergence(const ExperimentConfig& cfg, OutputDir& out, const RunOptions& opts = {})
{
	using namespace detail;
	if (cfg.trials < 2) throw ConfigError("trials", "dos-convergence needs at least two seeds");
	if (cfg.dos_convergence.M_list.size() < 2) throw ConfigError("dos_convergence.M_list", "needs at least two values");
	auto manifest = start_manifest("dos-convergence", cfg);
	const auto seeds = cfg.seeds();
	const auto& Ms = cfg.dos_convergence.M_list;
	const auto res = dos_convergence(cfg.library, Ms, seeds, opts.threads);

	CsvTable xt({"M", "trial_a", "trial_b", "kolmogorov"});
	CsvTable summary({"M", "mean_kolmogorov", "max_kolmogorov"});
	SvgSeries mean_line{{}, palette(0)};
	for (std::size_t m = 0; m < Ms.size(); ++m) {
		std::size_t p = 0;
		for (std::size_t a = 0; a < seeds.size(); ++a)
			for (std::size_t b = a + 1; b < seeds.size(); ++b) xt.add({as_int(Ms[m]), as_int(a), as_int(b), res.cross_seed[m][p++]});
		summary.add({as_int(Ms[m]), res.mean_cross_seed(m), res.max_cross_seed(m)});
		mean_line.points.emplace_back(std::log10(static_cast<double>(Ms[m])), res.mean_cross_seed(m));
	}
	CsvTable ct({"trial", "M_from", "M_to", "kolmogorov"});
	for (std::size_t s = 0; s < seeds.size(); ++s)
		for (std::size_t m = 0; m + 1 < Ms.size(); ++m)
			ct.add({as_int(s), as_int(Ms[m]), as_int(Ms[m + 1]), res.consecutive[s][m]});
	out.save("dos_cross_seed.csv", xt);
	out.save("dos_consecutive.csv", ct);
	out.save("dos_summary.csv", summary);
	if (opts.svg) {
		mean_line.markers = false;
		SvgPlot plot{"mean cross-seed Kolmogorov distance", "log10 M", "distance", {mean_line}};
		out.save_text("dos_convergence.svg", plot.render());
	}
	manifest.files = out.files();
	return manifest;
}

} // namespace gaugechain::runner
