#include "fxcredit/cli/portfolio_io.hpp"

#include "fxcredit/cli/format.hpp"
#include "fxcredit/errors.hpp"
#include "fxcredit/model/adjustment.hpp"
#include "fxcredit/numerics/normal.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace fxcredit::cli {

namespace {

bool is_comment_or_blank(std::string_view line) {
    line = trim(line);
    return line.empty() || line.front() == '#';
}

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

// Header-indexed row access with located errors.
class Row {
public:
    Row(const std::string& source, int line, const std::map<std::string, std::size_t>& columns,
        std::vector<std::string> fields)
        : source_(source), line_(line), columns_(columns), fields_(std::move(fields)) {}

    bool has(const std::string& column) const {
        const auto it = columns_.find(column);
        return it != columns_.end() && !fields_[it->second].empty();
    }

    const std::string& text(const std::string& column) const {
        const auto it = columns_.find(column);
        if (it == columns_.end() || fields_[it->second].empty())
            throw InputError(exit_validation, where(column), "missing value");
        return fields_[it->second];
    }

    double number(const std::string& column) const {
        double v = 0.0;
        if (!parse_double(text(column), v))
            throw InputError(exit_validation, where(column), "not a finite number: '" + text(column) + "'");
        return v;
    }

    // Runs a constructor that may throw DomainError, relabelling the error
    // with this row's location.
    template <typename Fn>
    auto checked(const std::string& column, Fn fn) const {
        try {
            return fn();
        } catch (const DomainError& e) {
            throw InputError(exit_validation, where(column), e.what());
        }
    }

    std::string where(const std::string& column) const { return location(source_, line_, column); }

private:
    const std::string& source_;
    int line_;
    const std::map<std::string, std::size_t>& columns_;
    std::vector<std::string> fields_;
};

std::map<std::string, std::size_t> parse_header(const std::string& line, const std::string& source, int line_no,
                                                const std::set<std::string>& allowed,
                                                const std::set<std::string>& required) {
    std::map<std::string, std::size_t> columns;
    const auto names = split_fields(line);
    for (std::size_t i = 0; i < names.size(); ++i) {
        const std::string name = lower(names[i]);
        if (!allowed.contains(name))
            throw InputError(exit_validation, location(source, line_no, name), "unknown column");
        if (!columns.emplace(name, i).second)
            throw InputError(exit_validation, location(source, line_no, name), "duplicate column");
    }
    for (const auto& name : required)
        if (!columns.contains(name))
            throw InputError(exit_validation, location(source, line_no, name), "required column missing from header");
    return columns;
}

const std::set<std::string> kProcessColumns{"a0", "mu", "debt", "f0"};

BorrowerRecord parse_borrower(const Row& row, int line) {
    BorrowerRecord b;
    b.line = line;
    b.id = row.text("id");
    b.sigma = row.number("sigma");
    if (!(b.sigma > 0.0))
        throw InputError(exit_validation, row.where("sigma"), "asset volatility must be > 0");
    b.r = row.checked("r", [&] { return Correlation(row.number("r")); });

    const auto filled = std::count_if(kProcessColumns.begin(), kProcessColumns.end(),
                                      [&](const std::string& c) { return row.has(c); });
    if (filled != 0 && filled != 4) {
        for (const auto& c : kProcessColumns)
            if (!row.has(c))
                throw InputError(exit_validation, row.where(c), "process columns a0,mu,debt,f0 must be given together");
    }
    if (filled == 4) {
        b.asset = row.checked("a0", [&] { return AssetProcess(row.number("a0"), row.number("mu"), b.sigma); });
        b.debt = row.checked("debt", [&] { return DebtSpec(row.number("debt"), row.number("f0")); });
    }

    if (row.has("pd")) {
        b.pd = row.checked("pd", [&] { return Probability(row.number("pd")); });
        if (b.asset) {
            const double implied = std_normal_cdf(threshold_from_process(*b.asset, *b.debt));
            if (std::abs(implied - b.pd.value()) > 1e-6 * b.pd.value()) {
                throw InputError(exit_validation, row.where("pd"),
                                 "pd " + format_number(b.pd.value()) + " disagrees with the process-implied pd " +
                                     format_number(implied));
            }
        }
    } else if (b.asset) {
        b.pd = row.checked("pd", [&] { return Probability(std_normal_cdf(threshold_from_process(*b.asset, *b.debt))); });
    } else {
        throw InputError(exit_validation, row.where("pd"), "missing value (give pd or a0,mu,debt,f0)");
    }
    return b;
}

} // namespace

std::string location(const std::string& source, int line, const std::string& field) {
    std::string out = source + ":" + std::to_string(line);
    if (!field.empty())
        out += ":" + field;
    return out;
}

const BorrowerRecord& Portfolio::borrower(const std::string& id) const {
    const auto it = std::find_if(borrowers.begin(), borrowers.end(), [&](const auto& b) { return b.id == id; });
    if (it == borrowers.end())
        throw std::out_of_range("unknown borrower id '" + id + "'");
    return *it;
}

Portfolio parse_portfolio(std::istream& in, const std::string& source) {
    enum class Section { none, fx, borrowers, pairs };

    Portfolio pf;
    pf.source = source;
    Section section = Section::none;
    std::set<std::string> seen_sections;
    std::map<std::string, std::size_t> borrower_cols, pair_cols;
    bool need_header = false;
    bool have_borrowers = false, have_pairs = false;

    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (is_comment_or_blank(line))
            continue;
        const std::string_view t = trim(line);

        if (t.front() == '[') {
            if (t.back() != ']')
                throw InputError(exit_validation, location(source, line_no), "malformed section header");
            const std::string name = lower(trim(t.substr(1, t.size() - 2)));
            if (!seen_sections.insert(name).second)
                throw InputError(exit_validation, location(source, line_no), "duplicate section [" + name + "]");
            if (name == "fx") {
                section = Section::fx;
            } else if (name == "borrowers") {
                section = Section::borrowers;
                have_borrowers = true;
            } else if (name == "pairs") {
                section = Section::pairs;
                have_pairs = true;
            } else {
                throw InputError(exit_validation, location(source, line_no), "unknown section [" + name + "]");
            }
            need_header = section != Section::fx;
            continue;
        }

        switch (section) {
        case Section::none:
            throw InputError(exit_validation, location(source, line_no), "content before the first [section]");
        case Section::fx: {
            const auto eq = t.find('=');
            if (eq == std::string_view::npos)
                throw InputError(exit_validation, location(source, line_no), "expected key = value");
            const std::string key = lower(trim(t.substr(0, eq)));
            double v = 0.0;
            if (key != "nu" && key != "tau")
                throw InputError(exit_validation, location(source, line_no, key), "unknown fx key");
            if (!parse_double(t.substr(eq + 1), v))
                throw InputError(exit_validation, location(source, line_no, key),
                                 "not a finite number: '" + std::string(trim(t.substr(eq + 1))) + "'");
            if (key == "tau" && v < 0.0)
                throw InputError(exit_validation, location(source, line_no, key), "fx volatility must be >= 0");
            auto& slot = key == "nu" ? pf.nu : pf.tau;
            if (slot)
                throw InputError(exit_validation, location(source, line_no, key), "duplicate fx key");
            slot = v;
            break;
        }
        case Section::borrowers:
            if (need_header) {
                borrower_cols = parse_header(std::string(t), source, line_no,
                                             {"id", "pd", "sigma", "r", "a0", "mu", "debt", "f0"}, {"id", "sigma", "r"});
                if (!borrower_cols.contains("pd") &&
                    !std::all_of(kProcessColumns.begin(), kProcessColumns.end(),
                                 [&](const std::string& c) { return borrower_cols.contains(c); }))
                    throw InputError(exit_validation, location(source, line_no, "pd"),
                                     "header needs pd or all of a0,mu,debt,f0");
                need_header = false;
            } else {
                auto fields = split_fields(t);
                if (fields.size() != borrower_cols.size())
                    throw InputError(exit_validation, location(source, line_no),
                                     "expected " + std::to_string(borrower_cols.size()) + " fields, got " +
                                         std::to_string(fields.size()));
                const Row row(source, line_no, borrower_cols, std::move(fields));
                BorrowerRecord b = parse_borrower(row, line_no);
                const bool dup = std::any_of(pf.borrowers.begin(), pf.borrowers.end(),
                                             [&](const auto& other) { return other.id == b.id; });
                if (dup)
                    throw InputError(exit_validation, row.where("id"), "duplicate borrower id '" + b.id + "'");
                pf.borrowers.push_back(std::move(b));
            }
            break;
        case Section::pairs:
            if (need_header) {
                pair_cols = parse_header(std::string(t), source, line_no, {"id1", "id2", "rho"}, {"id1", "id2", "rho"});
                need_header = false;
            } else {
                auto fields = split_fields(t);
                if (fields.size() != pair_cols.size())
                    throw InputError(exit_validation, location(source, line_no),
                                     "expected " + std::to_string(pair_cols.size()) + " fields, got " +
                                         std::to_string(fields.size()));
                const Row row(source, line_no, pair_cols, std::move(fields));
                PairRecord p;
                p.line = line_no;
                p.id1 = row.text("id1");
                p.id2 = row.text("id2");
                p.rho = row.checked("rho", [&] { return Correlation(row.number("rho")); });
                pf.pairs.push_back(std::move(p));
            }
            break;
        }
    }

    if (!have_borrowers)
        throw InputError(exit_validation, location(source, line_no), "missing [borrowers] section");
    if (!have_pairs)
        throw InputError(exit_validation, location(source, line_no), "missing [pairs] section");

    for (const auto& p : pf.pairs) {
        for (const auto& [field, id] : {std::pair{"id1", p.id1}, std::pair{"id2", p.id2}}) {
            const bool known = std::any_of(pf.borrowers.begin(), pf.borrowers.end(),
                                           [&](const auto& b) { return b.id == id; });
            if (!known)
                throw InputError(exit_validation, location(source, p.line, field), "unknown borrower id '" + id + "'");
        }
        const CorrMatrix3 m{pf.borrower(p.id1).r, pf.borrower(p.id2).r, p.rho};
        if (auto violation = m.psd_violation())
            throw InputError(exit_model_validity, location(source, p.line, "pair " + p.id1 + "," + p.id2),
                             "correlation matrix of (fx, asset1, asset2) is not PSD: " + *violation);
    }
    return pf;
}

Portfolio load_portfolio(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw InputError(exit_validation, path, "cannot open file");
    return parse_portfolio(in, path);
}

std::vector<AdjustedRow> parse_adjusted(std::istream& in, const std::string& source) {
    std::vector<AdjustedRow> rows;
    std::map<std::string, std::size_t> cols;
    bool need_header = true;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (is_comment_or_blank(line))
            continue;
        if (need_header) {
            cols = parse_header(std::string(trim(line)), source, line_no,
                                {"id1", "id2", "p1", "p2", "rho", "p1_star", "p2_star", "rho_star"},
                                {"p1", "p2", "rho", "p1_star", "p2_star", "rho_star"});
            need_header = false;
            continue;
        }
        auto fields = split_fields(trim(line));
        if (fields.size() != cols.size())
            throw InputError(exit_validation, location(source, line_no),
                             "expected " + std::to_string(cols.size()) + " fields, got " + std::to_string(fields.size()));
        const Row row(source, line_no, cols, std::move(fields));
        AdjustedRow r;
        r.line = line_no;
        if (row.has("id1"))
            r.id1 = row.text("id1");
        if (row.has("id2"))
            r.id2 = row.text("id2");
        r.p1 = row.number("p1");
        r.p2 = row.number("p2");
        r.rho = row.number("rho");
        r.p1_star = row.number("p1_star");
        r.p2_star = row.number("p2_star");
        r.rho_star = row.number("rho_star");
        rows.push_back(std::move(r));
    }
    if (need_header)
        throw InputError(exit_validation, location(source, line_no), "missing header row");
    return rows;
}

CurveSpec parse_curve_spec(std::istream& in, const std::string& source) {
    std::optional<double> p, rho;
    std::optional<std::vector<double>> grid;
    std::optional<unsigned long long> points;
    std::string line;
    int line_no = 0;
    int p_line = 0, rho_line = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (is_comment_or_blank(line))
            continue;
        const std::string_view t = trim(line);
        const auto eq = t.find('=');
        if (eq == std::string_view::npos)
            throw InputError(exit_validation, location(source, line_no), "expected key = value");
        const std::string key = lower(trim(t.substr(0, eq)));
        const std::string_view value = trim(t.substr(eq + 1));
        double v = 0.0;
        if (key == "p" || key == "rho") {
            if (!parse_double(value, v))
                throw InputError(exit_validation, location(source, line_no, key), "not a finite number");
            (key == "p" ? p : rho) = v;
            (key == "p" ? p_line : rho_line) = line_no;
        } else if (key == "grid") {
            std::vector<double> g;
            for (const auto& f : split_fields(value)) {
                if (!parse_double(f, v))
                    throw InputError(exit_validation, location(source, line_no, key), "not a finite number: '" + f + "'");
                g.push_back(v);
            }
            grid = std::move(g);
        } else if (key == "points") {
            unsigned long long n = 0;
            if (!parse_uint64(value, n) || n == 0)
                throw InputError(exit_validation, location(source, line_no, key), "expected a positive integer");
            points = n;
        } else {
            throw InputError(exit_validation, location(source, line_no, key), "unknown key");
        }
    }
    if (!p)
        throw InputError(exit_validation, location(source, line_no, "p"), "missing");
    if (!rho)
        throw InputError(exit_validation, location(source, line_no, "rho"), "missing");
    if (grid.has_value() == points.has_value())
        throw InputError(exit_validation, location(source, line_no, "grid"), "give exactly one of grid or points");

    CurveSpec spec;
    try {
        spec.p = Probability(*p);
    } catch (const DomainError& e) {
        throw InputError(exit_validation, location(source, p_line, "p"), e.what());
    }
    try {
        spec.rho = Correlation(*rho);
    } catch (const DomainError& e) {
        throw InputError(exit_validation, location(source, rho_line, "rho"), e.what());
    }
    spec.grid = grid ? *grid : uniform_curve_grid(*p, *points);
    validate_curve_grid(spec, location(source, line_no, "grid"));
    return spec;
}

void validate_curve_grid(const CurveSpec& spec, const std::string& where) {
    const double p = spec.p.value();
    if (!(p < 0.5))
        throw InputError(exit_validation, where, "p must lie in (0, 0.5)");
    if (!(spec.rho.value() < 1.0))
        throw InputError(exit_validation, where, "rho must be < 1");
    if (spec.grid.empty())
        throw InputError(exit_validation, where, "empty grid");
    for (std::size_t i = 0; i < spec.grid.size(); ++i) {
        const double g = spec.grid[i];
        if (!(g > p && g < 0.5))
            throw InputError(exit_validation, where,
                             "grid point " + format_number(g) + " outside the open interval (" + format_number(p) +
                                 ", 0.5)");
        if (i > 0 && !(g > spec.grid[i - 1]))
            throw InputError(exit_validation, where, "grid must be strictly increasing at point " + format_number(g));
    }
}

std::vector<double> uniform_curve_grid(double p, unsigned long long points) {
    std::vector<double> g(points);
    for (unsigned long long i = 0; i < points; ++i)
        g[i] = p + (0.5 - p) * static_cast<double>(i + 1) / static_cast<double>(points + 1);
    return g;
}

} // namespace fxcredit::cli
