#include "errts/epidemic.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "errts/errors.hpp"

namespace errts {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream is(line);
    while (std::getline(is, field, ',')) out.push_back(trim(field));
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

double parse_number(const std::string& text, std::size_t line, const char* column) {
    double v = 0.0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (text.empty() || ec != std::errc() || ptr != end || !std::isfinite(v)) {
        throw DataError("line " + std::to_string(line) + ": invalid " + column + " '" + text + "'");
    }
    return v;
}

}  // namespace

Date parse_date(const std::string& text) {
    int y = 0;
    unsigned m = 0, d = 0;
    char tail = 0;
    if (text.size() != 10 || std::sscanf(text.c_str(), "%4d-%2u-%2u%c", &y, &m, &d, &tail) != 3) {
        throw DataError("invalid ISO date '" + text + "'");
    }
    const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
    if (!ymd.ok()) throw DataError("invalid calendar date '" + text + "'");
    return std::chrono::sys_days{ymd};
}

std::string format_date(Date d) {
    const std::chrono::year_month_day ymd{d};
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    return buf;
}

EpidemicTable parse_table(std::istream& in) {
    std::string line;
    std::size_t lineno = 0;
    std::vector<std::string> header;
    while (std::getline(in, line)) {
        ++lineno;
        if (!trim(line).empty()) {
            header = split_fields(lower(trim(line)));
            break;
        }
    }
    EpidemicTable table;
    if (header == std::vector<std::string>{"date", "cases", "deaths"}) {
        table.generic = false;
    } else if (header == std::vector<std::string>{"date", "value"}) {
        table.generic = true;
    } else {
        throw DataError("line " + std::to_string(lineno) + ": expected header 'date,cases,deaths' or 'date,value'");
    }

    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        const auto fields = split_fields(trim(line));
        if (fields.size() != header.size()) {
            throw DataError("line " + std::to_string(lineno) + ": expected " + std::to_string(header.size()) +
                            " fields, got " + std::to_string(fields.size()));
        }
        Date date;
        try {
            date = parse_date(fields[0]);
        } catch (const DataError& e) {
            throw DataError("line " + std::to_string(lineno) + ": " + e.what());
        }
        if (!table.dates.empty() && date <= table.dates.back()) {
            throw DataError("line " + std::to_string(lineno) + ": date " + fields[0] +
                            (date == table.dates.back() ? " is duplicated" : " is not after the previous row"));
        }
        table.dates.push_back(date);
        if (table.generic) {
            table.values.push_back(parse_number(fields[1], lineno, "value"));
            continue;
        }
        const double cases = parse_number(fields[1], lineno, "cases");
        const double deaths = parse_number(fields[2], lineno, "deaths");
        if (cases < 0.0 || deaths < 0.0) {
            throw DataError("line " + std::to_string(lineno) + ": counts must be non-negative");
        }
        if (!table.cases.empty() && cases < table.cases.back()) {
            throw DataError("line " + std::to_string(lineno) + " (" + fields[0] + "): cumulative cases decrease");
        }
        if (!table.deaths.empty() && deaths < table.deaths.back()) {
            throw DataError("line " + std::to_string(lineno) + " (" + fields[0] + "): cumulative deaths decrease");
        }
        table.cases.push_back(cases);
        table.deaths.push_back(deaths);
    }
    if (table.dates.empty()) throw DataError("empty input");
    return table;
}

EpidemicTable ingest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open input file: " + path.string());
    return parse_table(in);
}

Series as_series(const EpidemicTable& table) {
    if (!table.generic) throw DataError("table holds case/death counts; build a mortality rate first");
    return Series(table.values, table.dates.front());
}

int definition_offset(int definition) {
    switch (definition) {
        case 1: return 14;
        case 2: return 10;
        case 3: return 0;
        default: throw DataError("mortality definition must be 1, 2 or 3");
    }
}

Series mortality_rate(const EpidemicTable& table, int definition, CountBasis basis) {
    if (table.generic) throw DataError("mortality rate needs a 'date,cases,deaths' table");
    const auto k = static_cast<std::size_t>(definition_offset(definition));
    std::vector<double> cases = table.cases, deaths = table.deaths;
    std::size_t first_row = 0;
    if (basis == CountBasis::Daily) {
        for (std::size_t t = cases.size(); t-- > 1;) {
            cases[t] -= cases[t - 1];
            deaths[t] -= deaths[t - 1];
        }
        first_row = 1;
    }
    if (cases.size() <= first_row + k) throw DataError("table too short for the mortality definition offset");
    std::vector<double> rate;
    for (std::size_t t = first_row + k; t < cases.size(); ++t) {
        const double denom = cases[t - k];
        if (denom == 0.0) {
            throw DataError("zero case count on " + format_date(table.dates[t - k]) +
                            " (denominator for " + format_date(table.dates[t]) + ")");
        }
        rate.push_back(100.0 * deaths[t] / denom);
    }
    return Series(std::move(rate), table.dates[first_row + k]);
}

}  // namespace errts
