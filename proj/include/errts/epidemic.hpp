#pragma once

#include <filesystem>
#include <istream>
#include <string>
#include <vector>

#include "errts/series.hpp"

namespace errts {

enum class CountBasis { Cumulative, Daily };

/// Rows of a `date,cases,deaths` file, or a generic `date,value` series.
struct EpidemicTable {
    std::vector<Date> dates;
    std::vector<double> cases;   // cumulative
    std::vector<double> deaths;  // cumulative
    std::vector<double> values;  // generic format only
    bool generic = false;

    [[nodiscard]] std::size_t size() const noexcept { return dates.size(); }
};

/// Parses CSV text. Throws DataError naming the line on malformed rows, out-of-order
/// or duplicate dates, and decreasing cumulative counts.
[[nodiscard]] EpidemicTable parse_table(std::istream& in);
[[nodiscard]] EpidemicTable ingest(const std::filesystem::path& path);

/// Generic value column as a dated series.
[[nodiscard]] Series as_series(const EpidemicTable& table);

/// Case-offset of a mortality definition: 1 -> 14, 2 -> 10, 3 -> 0.
[[nodiscard]] int definition_offset(int definition);

/// 100 * deaths[t] / cases[t-k] in percent. Daily basis uses first differences of the
/// cumulative counts. Throws DataError naming the date of a zero denominator.
[[nodiscard]] Series mortality_rate(const EpidemicTable& table, int definition,
                                    CountBasis basis = CountBasis::Cumulative);

[[nodiscard]] Date parse_date(const std::string& text);
[[nodiscard]] std::string format_date(Date d);

}  // namespace errts
