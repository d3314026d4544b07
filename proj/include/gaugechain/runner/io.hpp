#pragma once

// Output writers: CSV tables, run manifests and minimal SVG plots.
// Numbers are printed with 17 significant digits so they round-trip.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

namespace gaugechain::runner {

namespace fs = std::filesystem;

inline std::string format_number(double x)
{
	if (std::isnan(x)) return "nan";
	if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
	char buf[32];
	const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
	return {buf, res.ptr};
}

using Cell = std::variant<double, std::int64_t, std::uint64_t, std::string>;

inline std::string format_cell(const Cell& c)
{
	struct {
		std::string operator()(double x) const { return format_number(x); }
		std::string operator()(std::int64_t x) const { return std::to_string(x); }
		std::string operator()(std::uint64_t x) const { return std::to_string(x); }
		std::string operator()(const std::string& x) const { return x; }
	} visitor;
	return std::visit(visitor, c);
}

/// Rows are buffered and written in one go by `save`.
class CsvTable {
public:
	explicit CsvTable(std::vector<std::string> header) : header_{std::move(header)} {}

	void add(std::vector<Cell> row)
	{
		if (row.size() != header_.size()) throw std::logic_error("CsvTable: row width does not match header");
		rows_.push_back(std::move(row));
	}

	[[nodiscard]] std::size_t rows() const noexcept { return rows_.size(); }

	[[nodiscard]] std::string str() const
	{
		std::string out;
		auto line = [&](const auto& cells, auto fmt) {
			for (std::size_t i = 0; i < cells.size(); ++i) {
				if (i) out += ',';
				out += fmt(cells[i]);
			}
			out += '\n';
		};
		line(header_, [](const std::string& s) { return s; });
		for (const auto& r : rows_) line(r, format_cell);
		return out;
	}

	void save(const fs::path& path) const
	{
		std::ofstream f(path, std::ios::binary);
		if (!f) throw std::runtime_error("cannot write " + path.string());
		f << str();
	}

private:
	std::vector<std::string> header_;
	std::vector<std::vector<Cell>> rows_;
};

/// Collects the files a subcommand writes, relative to the output directory.
class OutputDir {
public:
	explicit OutputDir(fs::path root) : root_{std::move(root)} { fs::create_directories(root_); }

	void save(const std::string& name, const CsvTable& table)
	{
		table.save(root_ / name);
		files_.push_back(name);
	}

	void save_text(const std::string& name, const std::string& text)
	{
		std::ofstream f(root_ / name, std::ios::binary);
		if (!f) throw std::runtime_error("cannot write " + (root_ / name).string());
		f << text;
		files_.push_back(name);
	}

	[[nodiscard]] const fs::path& root() const noexcept { return root_; }
	[[nodiscard]] const std::vector<std::string>& files() const noexcept { return files_; }

private:
	fs::path root_;
	std::vector<std::string> files_;
};

struct RunManifest {
	std::string tool_version;
	std::string command;
	std::uint64_t config_hash = 0;
	nlohmann::json config;
	std::vector<std::uint64_t> seeds;
	std::vector<std::string> files;
	double wall_clock_seconds = 0.0;
	nlohmann::json results = nlohmann::json::object();

	[[nodiscard]] nlohmann::json to_json() const
	{
		std::ostringstream hash;
		hash << std::hex;
		hash.width(16);
		hash.fill('0');
		hash << config_hash;
		return {{"tool_version", tool_version}, {"command", command},   {"config_hash", hash.str()},
		        {"config", config},             {"seeds", seeds},       {"files", files},
		        {"wall_clock_seconds", wall_clock_seconds}, {"results", results}};
	}
};

// --- SVG --------------------------------------------------------------------

struct SvgSeries {
	std::vector<std::complex<double>> points; ///< (x, y) as (re, im)
	std::string colour = "#1f77b4";
	bool markers = false; ///< draw dots instead of a line
	bool closed = false;
};

struct SvgPlot {
	std::string title;
	std::string x_label;
	std::string y_label;
	std::vector<SvgSeries> series;

	[[nodiscard]] std::string render(int width = 640, int height = 480) const
	{
		double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
		for (const auto& s : series)
			for (const auto& p : s.points) {
				if (!std::isfinite(p.real()) || !std::isfinite(p.imag())) continue;
				x0 = std::min(x0, p.real());
				x1 = std::max(x1, p.real());
				y0 = std::min(y0, p.imag());
				y1 = std::max(y1, p.imag());
			}
		if (!(x0 < x1)) {
			x0 = std::isfinite(x0) ? x0 - 1.0 : 0.0;
			x1 = x0 + 2.0;
		}
		if (!(y0 < y1)) {
			y0 = std::isfinite(y0) ? y0 - 1.0 : 0.0;
			y1 = y0 + 2.0;
		}
		const double margin = 50.0;
		const double w = width - 2 * margin, h = height - 2 * margin;
		auto px = [&](double x) { return margin + (x - x0) / (x1 - x0) * w; };
		auto py = [&](double y) { return height - margin - (y - y0) / (y1 - y0) * h; };
		auto num = [](double v) {
			char buf[32];
			const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 6);
			return std::string{buf, r.ptr};
		};

		std::ostringstream o;
		o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\">\n";
		o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
		o << "<rect x=\"" << margin << "\" y=\"" << margin << "\" width=\"" << w << "\" height=\"" << h
		  << "\" fill=\"none\" stroke=\"black\"/>\n";
		o << "<text x=\"" << width / 2 << "\" y=\"" << margin / 2 << "\" text-anchor=\"middle\">" << title << "</text>\n";
		o << "<text x=\"" << width / 2 << "\" y=\"" << height - 10 << "\" text-anchor=\"middle\">" << x_label << "</text>\n";
		o << "<text x=\"15\" y=\"" << height / 2 << "\" transform=\"rotate(-90 15 " << height / 2
		  << ")\" text-anchor=\"middle\">" << y_label << "</text>\n";
		o << "<text x=\"" << margin << "\" y=\"" << height - margin + 15 << "\" font-size=\"10\">" << num(x0) << "</text>\n";
		o << "<text x=\"" << margin + w << "\" y=\"" << height - margin + 15 << "\" font-size=\"10\" text-anchor=\"end\">"
		  << num(x1) << "</text>\n";
		o << "<text x=\"" << margin - 4 << "\" y=\"" << height - margin << "\" font-size=\"10\" text-anchor=\"end\">"
		  << num(y0) << "</text>\n";
		o << "<text x=\"" << margin - 4 << "\" y=\"" << margin + 10 << "\" font-size=\"10\" text-anchor=\"end\">" << num(y1)
		  << "</text>\n";

		for (const auto& s : series) {
			if (s.markers) {
				for (const auto& p : s.points)
					if (std::isfinite(p.real()) && std::isfinite(p.imag()))
						o << "<circle cx=\"" << num(px(p.real())) << "\" cy=\"" << num(py(p.imag())) << "\" r=\"1.5\" fill=\""
						  << s.colour << "\"/>\n";
				continue;
			}
			o << "<path fill=\"none\" stroke=\"" << s.colour << "\" stroke-width=\"1\" d=\"";
			bool pen_down = false;
			for (const auto& p : s.points) {
				if (!std::isfinite(p.real()) || !std::isfinite(p.imag())) {
					pen_down = false;
					continue;
				}
				o << (pen_down ? 'L' : 'M') << num(px(p.real())) << ' ' << num(py(p.imag())) << ' ';
				pen_down = true;
			}
			if (s.closed) o << 'Z';
			o << "\"/>\n";
		}
		o << "</svg>\n";
		return o.str();
	}
};

} // namespace gaugechain::runner
