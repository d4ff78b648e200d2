#ifndef HAWKES_CSV_HPP
#define HAWKES_CSV_HPP

#include <concepts>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include "hawkes/experiments.hpp"
#include "hawkes/integrators.hpp"
#include "hawkes/model.hpp"
#include "hawkes/moment_bounds.hpp"
#include "hawkes/pdmp.hpp"
#include "hawkes/stats.hpp"

namespace hawkes {

// Locale-independent decimal rendering with 17 significant digits, enough
// for 64-bit floats to round-trip exactly.
std::string format_double(double value);

// RFC-4180 quoting: fields containing commas, quotes or newlines are quoted
// and embedded quotes doubled; everything else passes through unchanged.
std::string csv_quote(std::string_view field);

// Streaming CSV writer. Comment lines ("# ...") must come first, then one
// header row, then data rows. Numeric fields are rendered with
// format_double, so output is bit-reproducible across runs and locales.
class CsvWriter {
public:
    explicit CsvWriter(const std::filesystem::path& file);

    void comment(std::string_view line);
    void header(const std::vector<std::string>& names);

    CsvWriter& field(double value);
    template <std::integral T>
    CsvWriter& field(T value) {
        add_raw(std::to_string(value));
        return *this;
    }
    CsvWriter& field(std::string_view text);
    CsvWriter& field(const char* text) { return field(std::string_view(text)); }
    void end_row();

    template <class... Fields>
    void row(const Fields&... fields) {
        (field(fields), ...);
        end_row();
    }

    // Flushes and reports whether every write succeeded.
    bool close();

private:
    void add_raw(std::string_view rendered);

    std::ofstream out_;
    bool row_open_ = false;
};

// Component label "x_k_j" for state column headers, k and j 1-based.
std::vector<std::string> state_column_names(const NetworkModel& model);

// Writers for the toolkit's result types. Each appends rows to a writer
// whose comment lines the caller has already emitted.

// Columns: t, x_k_j...
void write_trajectory(CsvWriter& out, const NetworkModel& model, const Trajectory& trajectory);

// Columns: t, x_k_j... (grid samples of a thinning run).
void write_samples(CsvWriter& out, const NetworkModel& model,
                   const std::vector<double>& times, const std::vector<StateVec>& samples);

// Columns: t, population, neuron, x_k_j..., lambda_1, lambda_2.
void write_pdmp_path(CsvWriter& out, const NetworkModel& model, const PdmpPath& path);

// Columns: t, population, neuron.
void write_spikes(CsvWriter& out, const SpikeTrain& spikes);

// Columns: t, component, order, flavor, lower, upper.
void write_moment_curve(CsvWriter& out, const std::vector<MomentBoundRow>& rows);

// Columns: x, density (one file per estimate; bandwidth, n and the sample
// mean are recorded as comments).
void write_density(CsvWriter& out, const DensityEstimate& estimate);

// Columns: delta, scheme, rmse, replicates, t_star.
void write_rmse_table(CsvWriter& out, const RmseTable& table);

// Columns: scheme, slope, intercept, residual_rms.
void write_rmse_fits(CsvWriter& out, const RmseTable& table);

// Columns: method, n_total, bound, mean_seconds, sd_seconds,
// rejection_fraction, mean_spikes.
void write_timing_table(CsvWriter& out, const TimingTable& table);

// Columns: population, mean_pdmp, mean_diffusion, ks_distance,
// amplitude_pdmp.
void write_comparison_summary(CsvWriter& out, const ComparisonReport& report);

}  // namespace hawkes

#endif
