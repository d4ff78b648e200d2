#include "hawkes/csv.hpp"

#include <charconv>
#include <stdexcept>
#include <system_error>
#include <utility>

namespace hawkes {

std::string format_double(double value) {
    char buffer[64];
    const auto result =
        std::to_chars(buffer, buffer + sizeof(buffer), value, std::chars_format::general, 17);
    if (result.ec != std::errc()) throw std::runtime_error("format_double: to_chars failed");
    return std::string(buffer, result.ptr);
}

std::string csv_quote(std::string_view field) {
    const bool needs_quotes = field.find_first_of(",\"\r\n") != std::string_view::npos;
    if (!needs_quotes) return std::string(field);
    std::string quoted;
    quoted.reserve(field.size() + 2);
    quoted.push_back('"');
    for (const char c : field) {
        if (c == '"') quoted.push_back('"');
        quoted.push_back(c);
    }
    quoted.push_back('"');
    return quoted;
}

CsvWriter::CsvWriter(const std::filesystem::path& file) : out_(file) {
    if (!out_) throw std::runtime_error("cannot open " + file.string() + " for writing");
}

void CsvWriter::comment(std::string_view line) {
    out_ << "# " << line << '\n';
}

void CsvWriter::header(const std::vector<std::string>& names) {
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (i > 0) out_ << ',';
        out_ << csv_quote(names[i]);
    }
    out_ << '\n';
}

CsvWriter& CsvWriter::field(double value) {
    add_raw(format_double(value));
    return *this;
}

CsvWriter& CsvWriter::field(std::string_view text) {
    add_raw(csv_quote(text));
    return *this;
}

void CsvWriter::end_row() {
    out_ << '\n';
    row_open_ = false;
}

bool CsvWriter::close() {
    out_.flush();
    const bool ok = static_cast<bool>(out_);
    out_.close();
    return ok;
}

void CsvWriter::add_raw(std::string_view rendered) {
    if (row_open_) out_ << ',';
    row_open_ = true;
    out_ << rendered;
}

std::vector<std::string> state_column_names(const NetworkModel& model) {
    std::vector<std::string> names;
    names.reserve(static_cast<std::size_t>(model.kappa()));
    for (int k = 1; k <= 2; ++k) {
        for (int j = 1; j <= model.pop(k).eta + 1; ++j) {
            names.push_back("x_" + std::to_string(k) + "_" + std::to_string(j));
        }
    }
    return names;
}

namespace {

void state_header(CsvWriter& out, const NetworkModel& model, std::vector<std::string> leading,
                  std::vector<std::string> trailing = {}) {
    std::vector<std::string> names = std::move(leading);
    for (std::string& name : state_column_names(model)) names.push_back(std::move(name));
    for (std::string& name : trailing) names.push_back(std::move(name));
    out.header(names);
}

void state_fields(CsvWriter& out, const StateVec& x) {
    for (const double v : x) out.field(v);
}

}  // namespace

void write_trajectory(CsvWriter& out, const NetworkModel& model, const Trajectory& trajectory) {
    state_header(out, model, {"t"});
    for (std::size_t i = 0; i < trajectory.states.size(); ++i) {
        out.field(trajectory.time_at(i));
        state_fields(out, trajectory.states[i]);
        out.end_row();
    }
}

void write_samples(CsvWriter& out, const NetworkModel& model, const std::vector<double>& times,
                   const std::vector<StateVec>& samples) {
    state_header(out, model, {"t"});
    for (std::size_t i = 0; i < samples.size(); ++i) {
        out.field(times[i]);
        state_fields(out, samples[i]);
        out.end_row();
    }
}

void write_pdmp_path(CsvWriter& out, const NetworkModel& model, const PdmpPath& path) {
    state_header(out, model, {"t", "population", "neuron"}, {"lambda_1", "lambda_2"});
    out.field(path.t0).field(0).field(0);
    state_fields(out, path.x0);
    out.field(model.pop(1).rate(model.potential(path.x0, 1)));
    out.field(model.pop(2).rate(model.potential(path.x0, 2)));
    out.end_row();
    for (const PdmpEvent& event : path.events) {
        out.field(event.t).field(event.population).field(event.neuron);
        state_fields(out, event.state);
        out.field(event.lambda1).field(event.lambda2);
        out.end_row();
    }
}

void write_spikes(CsvWriter& out, const SpikeTrain& spikes) {
    out.header({"t", "population", "neuron"});
    for (const Spike& spike : spikes.spikes) {
        out.row(spike.t, spike.population, spike.neuron);
    }
}

void write_moment_curve(CsvWriter& out, const std::vector<MomentBoundRow>& rows) {
    out.header({"t", "component", "order", "flavor", "lower", "upper"});
    for (const MomentBoundRow& row : rows) {
        const std::string component =
            "x_" + std::to_string(row.k) + "_" + std::to_string(row.j);
        out.row(row.t, component, row.order, row.flavor, row.lower, row.upper);
    }
}

void write_density(CsvWriter& out, const DensityEstimate& estimate) {
    out.comment("component=" + estimate.component);
    out.comment("bandwidth=" + format_double(estimate.bandwidth));
    out.comment("n=" + std::to_string(estimate.n));
    out.comment("sample_mean=" + format_double(estimate.sample_mean));
    out.header({"x", "density"});
    for (std::size_t i = 0; i < estimate.grid.size(); ++i) {
        out.row(estimate.grid[i], estimate.density[i]);
    }
}

void write_rmse_table(CsvWriter& out, const RmseTable& table) {
    out.header({"delta", "scheme", "rmse", "replicates", "t_star"});
    for (const RmseRow& row : table.rows) {
        out.row(row.delta, scheme_name(row.scheme), row.rmse, table.replicates, table.t_star);
    }
}

void write_rmse_fits(CsvWriter& out, const RmseTable& table) {
    out.header({"scheme", "slope", "intercept", "residual_rms"});
    for (const SchemeFit& fit : table.fits) {
        out.row(scheme_name(fit.scheme), fit.fit.slope, fit.fit.intercept, fit.fit.residual_rms);
    }
}

void write_timing_table(CsvWriter& out, const TimingTable& table) {
    out.header({"method", "n_total", "bound", "mean_seconds", "sd_seconds", "rejection_fraction",
                "mean_spikes"});
    for (const TimingRow& row : table.rows) {
        const std::string bound =
            row.method == "pdmp" ? (row.bound == BoundKind::Local ? "local" : "global") : "";
        out.row(row.method, row.n_total, bound, row.mean_seconds, row.sd_seconds,
                row.mean_rejection_fraction, row.mean_spikes);
    }
}

void write_comparison_summary(CsvWriter& out, const ComparisonReport& report) {
    out.header({"population", "mean_pdmp", "mean_diffusion", "ks_distance", "amplitude_pdmp"});
    for (const ComparisonVariable& var : report.variables) {
        out.row(var.population, var.mean_pdmp, var.mean_diffusion, var.ks_distance,
                var.amplitude_pdmp);
    }
}

}  // namespace hawkes
