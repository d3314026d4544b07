#pragma once

// Experiment configuration: a versioned JSON document, validated with
// field-path error messages.  See README.md for the schema.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <initializer_list>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "gaugechain/chain.hpp"
#include "gaugechain/contour.hpp"
#include "gaugechain/rng.hpp"

namespace gaugechain::runner {

using json = nlohmann::json;

inline constexpr int config_version = 1;

class ConfigError : public std::runtime_error {
public:
	ConfigError(const std::string& path, const std::string& what)
	    : std::runtime_error{(path.empty() ? std::string{"<root>"} : path) + ": " + what}, path_{path}
	{
	}
	[[nodiscard]] const std::string& path() const noexcept { return path_; }

private:
	std::string path_;
};

struct Grid1D {
	double lo = 0.0;
	double hi = 4.0;
	std::size_t count = 801;

	[[nodiscard]] std::vector<double> points() const { return linspace(lo, hi, count); }
};

struct SpectrumSection {
	Grid1D lambda_grid{};
	bool vectors = false;
};

struct LyapunovGridSection {
	Range re{0.0, 4.0};
	Range im{-1.0, 1.0};
	std::size_t nx = 121;
	std::size_t ny = 61;
	std::size_t theta_samples = 256;
	bool estimate = true;
};

struct CriticalGammaSection {
	double lambda_cut = 1.5;
	double gamma_ref = 1e-3;
	bool exact = false;
};

struct EnvelopeSection {
	double lambda_cut = 1.5;
	std::vector<double> p_monomer;          ///< empty: the library's own
	std::vector<double> gamma;              ///< empty: the library's own
	std::vector<double> critical_offsets;   ///< extra gamma = gamma_c(p_m) + offset
};

struct DosSection {
	std::vector<std::size_t> M_list{100, 300, 1000};
};

struct WindingSection {
	std::size_t theta_samples = 512;
};

struct ExperimentConfig {
	int version = config_version;
	BlockLibrary library = standard_blocks(1.0);
	/// Set when the library is the standard monomer/dimer pair; p_m sweeps need it.
	std::optional<double> standard_gamma = 1.0;
	std::optional<std::size_t> M;
	std::optional<std::size_t> N_target;
	std::uint64_t seed = 1;
	std::size_t trials = 1;

	SpectrumSection spectrum{};
	LyapunovGridSection lyapunov_grid{};
	EnvelopeSection envelope{};
	CriticalGammaSection critical_gamma{};
	DosSection dos_convergence{};
	WindingSection winding{};

	/// The document as read (with command-line overrides applied).
	json source = json::object();

	[[nodiscard]] std::size_t blocks_for(const BlockLibrary& lib) const
	{
		if (M) return *M;
		return blocks_for_target(lib, *N_target);
	}
	[[nodiscard]] std::size_t blocks() const { return blocks_for(library); }

	/// Trial t uses derive_seed(seed, t).
	[[nodiscard]] std::vector<std::uint64_t> seeds() const
	{
		std::vector<std::uint64_t> out;
		for (std::size_t t = 0; t < trials; ++t) out.push_back(derive_seed(seed, t));
		return out;
	}

	[[nodiscard]] BlockLibrary library_with(double p_monomer, double gamma) const
	{
		if (!standard_gamma) throw ConfigError("library", "a p_monomer sweep requires the standard library");
		return standard_blocks(gamma, p_monomer);
	}
};

namespace detail {

inline std::string join(const std::string& path, const std::string& key)
{
	return path.empty() ? key : path + "." + key;
}

inline std::string index(const std::string& path, std::size_t i)
{
	return path + "[" + std::to_string(i) + "]";
}

inline void check_keys(const json& obj, const std::string& path, std::initializer_list<const char*> allowed)
{
	if (!obj.is_object()) throw ConfigError(path, "expected an object");
	for (const auto& [key, value] : obj.items()) {
		bool ok = false;
		for (const char* a : allowed) ok = ok || key == a;
		if (!ok) throw ConfigError(join(path, key), "unknown field");
	}
}

inline double number(const json& v, const std::string& path)
{
	if (!v.is_number()) throw ConfigError(path, "expected a number");
	const double x = v.get<double>();
	if (!std::isfinite(x)) throw ConfigError(path, "must be finite");
	return x;
}

inline double positive(const json& v, const std::string& path)
{
	const double x = number(v, path);
	if (!(x > 0.0)) throw ConfigError(path, "must be positive");
	return x;
}

inline double probability(const json& v, const std::string& path)
{
	const double x = number(v, path);
	if (x < 0.0 || x > 1.0) throw ConfigError(path, "must lie in [0, 1]");
	return x;
}

inline std::uint64_t unsigned_integer(const json& v, const std::string& path)
{
	if (v.is_number_unsigned()) return v.get<std::uint64_t>();
	if (!v.is_number_integer() || v.get<std::int64_t>() < 0) throw ConfigError(path, "expected a non-negative integer");
	return static_cast<std::uint64_t>(v.get<std::int64_t>());
}

inline std::size_t count(const json& v, const std::string& path, std::size_t min = 1)
{
	const auto n = unsigned_integer(v, path);
	if (n < min) throw ConfigError(path, "must be at least " + std::to_string(min));
	return static_cast<std::size_t>(n);
}

inline bool boolean(const json& v, const std::string& path)
{
	if (!v.is_boolean()) throw ConfigError(path, "expected true or false");
	return v.get<bool>();
}

inline const json& array(const json& v, const std::string& path, bool allow_empty = false)
{
	if (!v.is_array()) throw ConfigError(path, "expected an array");
	if (!allow_empty && v.empty()) throw ConfigError(path, "must not be empty");
	return v;
}

inline Range range(const json& v, const std::string& path)
{
	array(v, path);
	if (v.size() != 2) throw ConfigError(path, "expected [lo, hi]");
	Range r{number(v[0], index(path, 0)), number(v[1], index(path, 1))};
	if (!(r.lo < r.hi)) throw ConfigError(path, "lo must be below hi");
	return r;
}

inline Grid1D grid1d(const json& v, const std::string& path)
{
	check_keys(v, path, {"lo", "hi", "count"});
	Grid1D g;
	if (v.contains("lo")) g.lo = number(v["lo"], join(path, "lo"));
	if (v.contains("hi")) g.hi = number(v["hi"], join(path, "hi"));
	if (v.contains("count")) g.count = count(v["count"], join(path, "count"), 2);
	if (!(g.lo < g.hi)) throw ConfigError(path, "lo must be below hi");
	return g;
}

inline ResonatorParams resonator(const json& v, const std::string& path)
{
	check_keys(v, path, {"v", "ell", "s", "gamma"});
	for (const char* k : {"v", "ell", "s"})
		if (!v.contains(k)) throw ConfigError(join(path, k), "missing");
	return {positive(v["v"], join(path, "v")), positive(v["ell"], join(path, "ell")), positive(v["s"], join(path, "s")),
	        v.contains("gamma") ? number(v["gamma"], join(path, "gamma")) : 0.0};
}

inline void parse_library(const json& v, const std::string& path, ExperimentConfig& cfg)
{
	check_keys(v, path, {"standard", "blocks", "probabilities"});
	if (v.contains("standard") == v.contains("blocks"))
		throw ConfigError(path, "give exactly one of 'standard' or 'blocks'");

	if (v.contains("standard")) {
		if (v.contains("probabilities")) throw ConfigError(join(path, "probabilities"), "not used with 'standard'");
		const auto p = join(path, "standard");
		check_keys(v["standard"], p, {"gamma", "p_monomer"});
		const double gamma = v["standard"].contains("gamma") ? number(v["standard"]["gamma"], join(p, "gamma")) : 1.0;
		const double pm = v["standard"].contains("p_monomer") ? probability(v["standard"]["p_monomer"], join(p, "p_monomer")) : 0.5;
		cfg.library = standard_blocks(gamma, pm);
		cfg.standard_gamma = gamma;
		return;
	}

	const auto bp = join(path, "blocks");
	const auto& blocks = array(v["blocks"], bp);
	std::vector<Block> out;
	for (std::size_t d = 0; d < blocks.size(); ++d) {
		const auto p = index(bp, d);
		check_keys(blocks[d], p, {"name", "resonators"});
		Block b;
		if (blocks[d].contains("name")) {
			if (!blocks[d]["name"].is_string()) throw ConfigError(join(p, "name"), "expected a string");
			b.name = blocks[d]["name"].get<std::string>();
			if (b.name.empty() || b.name.find_first_of(",\"\n\r") != std::string::npos)
				throw ConfigError(join(p, "name"), "must be non-empty without commas, quotes or newlines");
		} else {
			b.name = "block" + std::to_string(d);
		}
		if (!blocks[d].contains("resonators")) throw ConfigError(join(p, "resonators"), "missing");
		const auto rp = join(p, "resonators");
		const auto& rs = array(blocks[d]["resonators"], rp);
		for (std::size_t i = 0; i < rs.size(); ++i) b.resonators.push_back(resonator(rs[i], index(rp, i)));
		out.push_back(std::move(b));
	}

	std::vector<double> probs;
	const auto pp = join(path, "probabilities");
	if (v.contains("probabilities")) {
		const auto& ps = array(v["probabilities"], pp);
		if (ps.size() != out.size()) throw ConfigError(pp, "needs one entry per block");
		for (std::size_t d = 0; d < ps.size(); ++d) probs.push_back(probability(ps[d], index(pp, d)));
	} else {
		probs.assign(out.size(), 1.0 / static_cast<double>(out.size()));
	}
	try {
		cfg.library = BlockLibrary{std::move(out), std::move(probs)};
	} catch (const std::invalid_argument& e) {
		throw ConfigError(pp, e.what());
	}
	cfg.standard_gamma.reset();
}

inline std::vector<double> number_list(const json& v, const std::string& path, bool probabilities)
{
	std::vector<double> out;
	const auto& a = array(v, path);
	for (std::size_t i = 0; i < a.size(); ++i)
		out.push_back(probabilities ? probability(a[i], index(path, i)) : number(a[i], index(path, i)));
	return out;
}

} // namespace detail

inline ExperimentConfig parse_config(const json& doc)
{
	using namespace detail;
	check_keys(doc, "", {"version", "library", "M", "N_target", "seed", "trials", "spectrum", "lyapunov_grid",
	                     "envelope", "critical_gamma", "dos_convergence", "winding"});
	ExperimentConfig cfg;
	cfg.source = doc;

	if (!doc.contains("version")) throw ConfigError("version", "missing");
	if (!doc["version"].is_number_integer() || doc["version"].get<int>() != config_version)
		throw ConfigError("version", "unsupported, expected " + std::to_string(config_version));

	if (doc.contains("library")) parse_library(doc["library"], "library", cfg);

	if (doc.contains("M") && doc.contains("N_target")) throw ConfigError("M", "give M or N_target, not both");
	if (doc.contains("M")) cfg.M = count(doc["M"], "M");
	else if (doc.contains("N_target")) cfg.N_target = count(doc["N_target"], "N_target");
	else cfg.M = 100;

	if (doc.contains("seed")) cfg.seed = unsigned_integer(doc["seed"], "seed");
	if (doc.contains("trials")) cfg.trials = count(doc["trials"], "trials");

	if (doc.contains("spectrum")) {
		const auto& s = doc["spectrum"];
		check_keys(s, "spectrum", {"lambda_grid", "vectors"});
		if (s.contains("lambda_grid")) cfg.spectrum.lambda_grid = grid1d(s["lambda_grid"], "spectrum.lambda_grid");
		if (s.contains("vectors")) cfg.spectrum.vectors = boolean(s["vectors"], "spectrum.vectors");
	}

	if (doc.contains("lyapunov_grid")) {
		const auto& s = doc["lyapunov_grid"];
		auto& out = cfg.lyapunov_grid;
		check_keys(s, "lyapunov_grid", {"re", "im", "grid", "theta_samples", "estimate"});
		if (s.contains("re")) out.re = range(s["re"], "lyapunov_grid.re");
		if (s.contains("im")) out.im = range(s["im"], "lyapunov_grid.im");
		if (s.contains("grid")) {
			const auto& g = array(s["grid"], "lyapunov_grid.grid");
			if (g.size() != 2) throw ConfigError("lyapunov_grid.grid", "expected [nx, ny]");
			out.nx = count(g[0], "lyapunov_grid.grid[0]", 8);
			out.ny = count(g[1], "lyapunov_grid.grid[1]", 8);
		}
		if (s.contains("theta_samples")) out.theta_samples = count(s["theta_samples"], "lyapunov_grid.theta_samples", 16);
		if (s.contains("estimate")) out.estimate = boolean(s["estimate"], "lyapunov_grid.estimate");
	}

	if (doc.contains("critical_gamma")) {
		const auto& s = doc["critical_gamma"];
		auto& out = cfg.critical_gamma;
		check_keys(s, "critical_gamma", {"lambda_cut", "gamma_ref", "exact"});
		if (s.contains("lambda_cut")) out.lambda_cut = number(s["lambda_cut"], "critical_gamma.lambda_cut");
		if (s.contains("gamma_ref")) out.gamma_ref = positive(s["gamma_ref"], "critical_gamma.gamma_ref");
		if (s.contains("exact")) out.exact = boolean(s["exact"], "critical_gamma.exact");
	}

	if (doc.contains("envelope")) {
		const auto& s = doc["envelope"];
		auto& out = cfg.envelope;
		check_keys(s, "envelope", {"lambda_cut", "p_monomer", "gamma", "critical_offsets"});
		if (s.contains("lambda_cut")) out.lambda_cut = number(s["lambda_cut"], "envelope.lambda_cut");
		if (s.contains("p_monomer")) out.p_monomer = number_list(s["p_monomer"], "envelope.p_monomer", true);
		if (s.contains("gamma")) out.gamma = number_list(s["gamma"], "envelope.gamma", false);
		if (s.contains("critical_offsets"))
			out.critical_offsets = number_list(s["critical_offsets"], "envelope.critical_offsets", false);
		if ((!out.p_monomer.empty() || !out.critical_offsets.empty()) && !cfg.standard_gamma)
			throw ConfigError("envelope", "p_monomer and critical_offsets require library.standard");
	}

	if (doc.contains("dos_convergence")) {
		const auto& s = doc["dos_convergence"];
		check_keys(s, "dos_convergence", {"M_list"});
		if (s.contains("M_list")) {
			const auto& a = array(s["M_list"], "dos_convergence.M_list");
			cfg.dos_convergence.M_list.clear();
			for (std::size_t i = 0; i < a.size(); ++i)
				cfg.dos_convergence.M_list.push_back(count(a[i], index("dos_convergence.M_list", i)));
		}
	}

	if (doc.contains("winding")) {
		const auto& s = doc["winding"];
		check_keys(s, "winding", {"theta_samples"});
		if (s.contains("theta_samples")) cfg.winding.theta_samples = count(s["theta_samples"], "winding.theta_samples", 16);
	}
	return cfg;
}

inline ExperimentConfig parse_config_text(const std::string& text)
{
	json doc;
	try {
		doc = json::parse(text);
	} catch (const json::parse_error& e) {
		throw ConfigError("", std::string{"not valid JSON: "} + e.what());
	}
	return parse_config(doc);
}

inline ExperimentConfig load_config(const std::string& path)
{
	std::ifstream in(path);
	if (!in) throw ConfigError("", "cannot open " + path);
	std::stringstream buf;
	buf << in.rdbuf();
	return parse_config_text(buf.str());
}

/// 64-bit FNV-1a.
inline std::uint64_t fnv1a(const std::string& bytes) noexcept
{
	std::uint64_t h = 0xcbf29ce484222325ULL;
	for (unsigned char c : bytes) {
		h ^= c;
		h *= 0x100000001b3ULL;
	}
	return h;
}

/// Hash of the canonical (sorted-key, compact) serialisation.
inline std::uint64_t config_hash(const json& doc) { return fnv1a(doc.dump()); }

/// Explicit-blocks form accepted under "library".
inline json library_to_json(const BlockLibrary& lib)
{
	json blocks = json::array();
	for (const auto& b : lib.blocks()) {
		json rs = json::array();
		for (const auto& r : b.resonators) rs.push_back({{"v", r.v}, {"ell", r.ell}, {"s", r.s}, {"gamma", r.gamma}});
		blocks.push_back({{"name", b.name}, {"resonators", rs}});
	}
	return {{"blocks", blocks}, {"probabilities", lib.probabilities()}};
}

/// A realised chain: its library, block sequence and the seed that drew it.
inline json chain_to_json(const Chain& chain)
{
	return {{"library", library_to_json(chain.library())},
	        {"sequence", chain.sequence().chi},
	        {"seed", chain.sequence().seed}};
}

inline Chain chain_from_json(const json& doc)
{
	using namespace detail;
	check_keys(doc, "", {"library", "sequence", "seed"});
	if (!doc.contains("library")) throw ConfigError("library", "missing");
	if (!doc.contains("sequence")) throw ConfigError("sequence", "missing");
	ExperimentConfig tmp;
	parse_library(doc["library"], "library", tmp);
	BlockSequence seq;
	const auto& chi = array(doc["sequence"], "sequence");
	for (std::size_t i = 0; i < chi.size(); ++i) {
		const auto d = unsigned_integer(chi[i], index("sequence", i));
		if (d >= tmp.library.size()) throw ConfigError(index("sequence", i), "block index out of range");
		seq.chi.push_back(static_cast<std::size_t>(d));
	}
	if (doc.contains("seed")) seq.seed = unsigned_integer(doc["seed"], "seed");
	return Chain{tmp.library, seq};
}

} // namespace gaugechain::runner
