#pragma once

#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "cnpf/common.hpp"
#include "cnpf/kernel.hpp"
#include "cnpf/psd.hpp"
#include "cnpf/sarason.hpp"
#include "cnpf/series.hpp"

namespace cnpf::io {

using json = nlohmann::json;

/// Shortest decimal form of x that parses back to exactly the same double
/// (std::to_chars).  Used for every numeric cell so outputs are byte-stable
/// across runs and lossless on re-read.
std::string format_real(Real x);

/// "re" or "re+imi"/"re-imi" in round-trip form, for human-facing scalars.
std::string format_complex(Complex z);

/// Simple CSV document: a header row plus string cells, written with '\n'
/// line endings and no quoting (cells never contain commas here).
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    void add_row(std::vector<std::string> cells) { rows.push_back(std::move(cells)); }
    std::string str() const;
    void save(const std::string& path) const;
};

/// [re, im] pair; accepts plain numbers (imaginary part zero) on input.
json to_json(Complex z);
Complex complex_from_json(const json& j);

json to_json(const KernelSpec& spec);
KernelSpec kernel_spec_from_json(const json& j);

/// {dim, order, coeffs: [[rank, re, im], ...]} with zero coefficients omitted.
json to_json(const Series& f);
Series series_from_json(const json& j);

json to_json(const VectorSeries& F);
VectorSeries vector_series_from_json(const json& j);

json to_json(const PsdReport& rep);

/// {a, psi_coeffs, phi_coeffs, certificates}: the factorization exchange
/// shape.  certificates carries the residual/margin scalars and the embedding
/// metadata.
json to_json(const Factorization& fac);

std::string dump_json(const json& j);
void save_json(const json& j, const std::string& path);
void save_text(const std::string& text, const std::string& path);

}  // namespace cnpf::io
