#include "mlpbench/report/csv.hpp"

#include <charconv>

#include "mlpbench/errors.hpp"
#include "mlpbench/report/config.hpp"

namespace mlpbench {

namespace {

std::string quote_if_needed(const std::string& field) {
    if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
    std::string out = "\"";
    for (const char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string optional_field(const std::optional<std::size_t>& value) {
    return value ? std::to_string(*value) : std::string();
}

/// Splits one logical CSV record starting at `pos`; advances `pos` past its line break.
std::vector<std::string> split_record(std::string_view text, std::size_t& pos, std::size_t line) {
    std::vector<std::string> fields(1);
    bool quoted = false;
    bool was_quoted = false;
    while (pos < text.size()) {
        const char c = text[pos];
        if (quoted) {
            if (c == '"') {
                if (pos + 1 < text.size() && text[pos + 1] == '"') {
                    fields.back() += '"';
                    ++pos;
                } else {
                    quoted = false;
                }
            } else {
                fields.back() += c;
            }
        } else if (c == '"') {
            if (!fields.back().empty() || was_quoted) {
                throw UsageError("csv line " + std::to_string(line) + ": stray quote");
            }
            quoted = true;
            was_quoted = true;
        } else if (c == ',') {
            fields.emplace_back();
            was_quoted = false;
        } else if (c == '\n') {
            ++pos;
            return fields;
        } else if (c == '\r' && pos + 1 < text.size() && text[pos + 1] == '\n') {
            pos += 2;
            return fields;
        } else {
            fields.back() += c;
        }
        ++pos;
    }
    if (quoted) throw UsageError("csv line " + std::to_string(line) + ": unterminated quote");
    return fields;
}

template <typename T>
T parse_number(const std::string& field, std::size_t line, const char* column) {
    T value{};
    const auto* end = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(field.data(), end, value);
    if (field.empty() || ec != std::errc{} || ptr != end) {
        throw UsageError("csv line " + std::to_string(line) + ": bad " + column + " '" + field + "'");
    }
    return value;
}

std::optional<std::size_t> parse_optional(const std::string& field, std::size_t line, const char* column) {
    if (field.empty()) return std::nullopt;
    return parse_number<std::size_t>(field, line, column);
}

}  // namespace

std::vector<CsvRow> csv_rows(const BenchConfig& config, std::span<const TimingRecord> records) {
    std::vector<CsvRow> rows;
    rows.reserve(records.size());
    for (const TimingRecord& rec : records) {
        rows.push_back({rec.run_id, config.strategy.kind, config.network.activation, config.network.loss,
                        config.strategy.batch_size, config.strategy.threads, config.epochs, rec.repeat_index,
                        rec.phase, rec.wall_ns});
    }
    return rows;
}

std::string emit_csv(std::span<const CsvRow> rows) {
    std::string out(kCsvHeader);
    out += '\n';
    for (const CsvRow& row : rows) {
        out += quote_if_needed(row.run_id);
        out += ',';
        out += to_string(row.strategy);
        out += ',';
        out += to_string(row.activation);
        out += ',';
        out += to_string(row.loss);
        out += ',';
        out += optional_field(row.batch_size);
        out += ',';
        out += optional_field(row.threads);
        out += ',';
        out += std::to_string(row.epochs);
        out += ',';
        out += std::to_string(row.repeat);
        out += ',';
        out += to_string(row.phase);
        out += ',';
        out += std::to_string(row.wall_ns);
        out += '\n';
    }
    return out;
}

std::vector<CsvRow> parse_csv(std::string_view text) {
    std::size_t pos = 0;
    std::size_t line = 1;
    const auto header = split_record(text, pos, line);
    std::string joined;
    for (std::size_t i = 0; i < header.size(); ++i) joined += (i ? "," : "") + header[i];
    if (joined != kCsvHeader) throw UsageError("csv: unexpected header '" + joined + "'");

    std::vector<CsvRow> rows;
    while (pos < text.size()) {
        ++line;
        const auto f = split_record(text, pos, line);
        if (f.size() == 1 && f[0].empty()) continue;
        if (f.size() != 10) {
            throw UsageError("csv line " + std::to_string(line) + ": expected 10 fields, got " + std::to_string(f.size()));
        }
        CsvRow row;
        try {
            row.run_id = f[0];
            row.strategy = parse_strategy_kind(f[1]);
            row.activation = parse_activation(f[2]);
            row.loss = parse_loss(f[3]);
        } catch (const ConfigError& e) {
            throw UsageError("csv line " + std::to_string(line) + ": " + e.what());
        }
        row.batch_size = parse_optional(f[4], line, "batch_size");
        row.threads = parse_optional(f[5], line, "threads");
        row.epochs = parse_number<std::size_t>(f[6], line, "epochs");
        row.repeat = parse_number<std::size_t>(f[7], line, "repeat");
        row.phase = parse_phase(f[8]);
        row.wall_ns = parse_number<std::int64_t>(f[9], line, "wall_ns");
        if (row.wall_ns < 0) throw UsageError("csv line " + std::to_string(line) + ": negative wall_ns");
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace mlpbench
