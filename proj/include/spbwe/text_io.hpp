#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace spbwe {

// Whitespace tokenization. Runs of blanks collapse; no empty tokens.
std::vector<std::string_view> split_ws(std::string_view line);
std::vector<std::string> split_tabs(const std::string& line);

std::vector<std::string> read_lines(const std::string& path);
std::string read_file(const std::string& path);

// Writes content to a temp file next to `path`, then renames over it.
void atomic_write(const std::string& path, const std::string& content);

// Shortest exact representations used in TSV output.
std::string fmt_double(double v);        // %.17g, round-trips exactly
std::string fmt_float_compact(double v); // %.9g, float-level fidelity

long long parse_ll(std::string_view s, const std::string& context);
double parse_double(std::string_view s, const std::string& context);

// 64-bit FNV-1a over file bytes, as 16 hex digits. Staleness detection only.
std::uint64_t fnv1a(const void* data, std::size_t n, std::uint64_t seed = 0xcbf29ce484222325ull);
std::string digest_file(const std::string& path);

}  // namespace spbwe
