#include "edr/io.hpp"

#include "io_text.hpp"

#include <fmt/format.h>

#include <fstream>
#include <map>
#include <string>

namespace edr::io {
namespace {

using detail::parse_double;
using detail::split;
using detail::trim;

struct CsvLine {
    std::size_t number;
    std::vector<std::string_view> fields;
};

class CsvReader {
public:
    explicit CsvReader(const std::filesystem::path& path) : path_(path.string())
    {
        std::ifstream in(path);
        if (!in) {
            throw InputError(fmt::format("{}: cannot open file", path_));
        }
        std::string line;
        while (std::getline(in, line)) {
            raw_.push_back(std::move(line));
        }
    }

    [[noreturn]] void fail(std::size_t line, std::string_view what) const
    {
        throw InputError(fmt::format("{}:{}: {}", path_, line, what));
    }
    [[noreturn]] void fail(std::string_view what) const
    {
        throw InputError(fmt::format("{}: {}", path_, what));
    }

    /// Non-blank lines after the header, which must equal `header` exactly.
    std::vector<CsvLine> rows(std::string_view header) const
    {
        std::vector<CsvLine> out;
        bool seen_header = false;
        for (std::size_t i = 0; i < raw_.size(); ++i) {
            const std::string_view text = trim(raw_[i]);
            if (text.empty()) {
                continue;
            }
            if (!seen_header) {
                if (text != header) {
                    fail(i + 1, fmt::format("expected header '{}'", header));
                }
                seen_header = true;
                continue;
            }
            out.push_back({i + 1, split(text, ',')});
        }
        if (!seen_header) {
            fail("empty file");
        }
        return out;
    }

    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
    std::vector<std::string> raw_;
};

ClockTime parse_time(const CsvReader& r, const CsvLine& row, std::string_view field)
{
    try {
        return ClockTime::parse(field);
    } catch (const DomainError&) {
        r.fail(row.number, fmt::format("'{}' is not an HH:MM time", field));
    }
}

double parse_value(const CsvReader& r, const CsvLine& row, std::string_view field, std::string_view column)
{
    const auto v = parse_double(field);
    if (!v) {
        r.fail(row.number, fmt::format("{} '{}' is not a finite number", column, field));
    }
    return *v;
}

/// Step index of `t` if it lies in the window. Misaligned times anywhere in
/// the file are an error: they mean the file is on a different step width.
std::optional<std::size_t> step_of(const CsvReader& r, const CsvLine& row, ClockTime t, const TimeGrid& grid)
{
    const long step = grid.step().count();
    const long offset = (t - grid.start()).count();
    if (((offset % step) + step) % step != 0) {
        r.fail(row.number, fmt::format("timestamp {} is not aligned to the {}-minute step starting at {}",
                                       t.to_string(), step, grid.start().to_string()));
    }
    if (offset < 0 || t >= grid.end()) {
        return std::nullopt;
    }
    return static_cast<std::size_t>(offset / step);
}

}  // namespace

std::vector<double> load_timeseries_csv(const std::filesystem::path& path, const TimeGrid& grid)
{
    const CsvReader reader(path);
    std::map<int, std::size_t> seen;  // minutes -> line
    std::vector<std::optional<double>> values(grid.steps());
    for (const CsvLine& row : reader.rows("time,value")) {
        if (row.fields.size() != 2) {
            reader.fail(row.number, fmt::format("expected 2 fields, found {}", row.fields.size()));
        }
        const ClockTime t = parse_time(reader, row, row.fields[0]);
        const double v = parse_value(reader, row, row.fields[1], "value");
        const auto [it, fresh] = seen.emplace(t.minutes(), row.number);
        if (!fresh) {
            reader.fail(row.number, fmt::format("duplicate timestamp {} (first seen on line {})", t.to_string(),
                                                it->second));
        }
        if (const auto k = step_of(reader, row, t, grid)) {
            values[*k] = v;
        }
    }

    std::vector<double> out;
    out.reserve(values.size());
    for (std::size_t k = 0; k < values.size(); ++k) {
        if (!values[k]) {
            reader.fail(fmt::format("missing timestamp {} inside window {}-{}", grid.time_at(k).to_string(),
                                    grid.start().to_string(), grid.end().to_string()));
        }
        out.push_back(*values[k]);
    }
    return out;
}

Schedule load_schedule_csv(const std::filesystem::path& path, const TimeGrid& grid)
{
    static constexpr std::string_view kHeader =
        "time,grid_load_kw,ev_served_kw,bes_discharge_kw,bes_charge_kw,mode_dis,mode_ch,soc,reduction_kw";
    const CsvReader reader(path);
    const auto rows = reader.rows(kHeader);
    if (rows.size() != grid.steps()) {
        reader.fail(fmt::format("expected {} schedule rows, found {}", grid.steps(), rows.size()));
    }

    auto binary = [&](const CsvLine& row, std::string_view field, std::string_view column) {
        if (field == "0") {
            return 0;
        }
        if (field == "1") {
            return 1;
        }
        reader.fail(row.number, fmt::format("{} '{}' must be 0 or 1", column, field));
    };

    Schedule sch;
    for (std::size_t k = 0; k < rows.size(); ++k) {
        const CsvLine& row = rows[k];
        if (row.fields.size() != 9) {
            reader.fail(row.number, fmt::format("expected 9 fields, found {}", row.fields.size()));
        }
        const ClockTime t = parse_time(reader, row, row.fields[0]);
        if (t != grid.time_at(k)) {
            reader.fail(row.number, fmt::format("expected time {}, found {}", grid.time_at(k).to_string(),
                                                t.to_string()));
        }
        const double dis = parse_value(reader, row, row.fields[3], "bes_discharge_kw");
        const double ch = parse_value(reader, row, row.fields[4], "bes_charge_kw");
        sch.grid_load.push_back(parse_value(reader, row, row.fields[1], "grid_load_kw"));
        sch.ev_served.push_back(parse_value(reader, row, row.fields[2], "ev_served_kw"));
        sch.bes_discharge.push_back(dis);
        sch.bes_charge.push_back(ch);
        sch.bes_net.push_back(dis - ch);
        sch.mode_discharge.push_back(binary(row, row.fields[5], "mode_dis"));
        sch.mode_charge.push_back(binary(row, row.fields[6], "mode_ch"));
        sch.soc.push_back(parse_value(reader, row, row.fields[7], "soc"));
        sch.reduction.push_back(parse_value(reader, row, row.fields[8], "reduction_kw"));
    }
    return sch;
}

}  // namespace edr::io
