#include "thumbs/thumbs.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "common/errors.hpp"
#include "common/textio.hpp"

namespace ssc {

namespace {

void check_range(double v, double lo, double hi, const char* field) {
    if (!(v >= lo && v <= hi))
        throw RangeError(std::string(field) + " = " + std::to_string(v) +
                         " outside [" + std::to_string(lo) + ", " +
                         std::to_string(hi) + "]");
}

void validate(const ThumbsRating& r) {
    check_range(r.p, 1.0, 5.0, "P");
    check_range(r.r, 1.0, 5.0, "R");
    check_range(r.f, -2.0, 0.0, "F");
    check_range(r.c, -2.0, 0.0, "C");
    check_range(r.i, -2.0, 0.0, "I");
}

} // namespace

double thumbs_score(const ThumbsRating& rating) {
    validate(rating);
    return (rating.p + rating.r) / 2.0 + rating.f + rating.c + rating.i;
}

std::vector<GroupStats> aggregate(const std::vector<ThumbsRating>& ratings) {
    if (ratings.empty()) throw EmptyGroupError("aggregate: no ratings");
    std::map<std::pair<std::string, std::string>, std::vector<const ThumbsRating*>>
        groups;
    for (const ThumbsRating& r : ratings)
        groups[{r.source, r.dataset}].push_back(&r);

    std::vector<GroupStats> out;
    for (const auto& [key, members] : groups) {
        GroupStats g;
        g.source = key.first;
        g.dataset = key.second;
        g.n = int(members.size());
        std::vector<std::array<double, 6>> rows;
        for (const ThumbsRating* r : members)
            rows.push_back({r->p, r->r, r->f, r->c, r->i, thumbs_score(*r)});
        for (int f = 0; f < 6; ++f) {
            double mean = 0.0;
            for (const auto& row : rows) mean += row[std::size_t(f)];
            mean /= double(g.n);
            g.mean[std::size_t(f)] = mean;
            if (g.n > 1) {
                double ss = 0.0;
                for (const auto& row : rows)
                    ss += (row[std::size_t(f)] - mean) *
                          (row[std::size_t(f)] - mean);
                g.stddev[std::size_t(f)] = std::sqrt(ss / double(g.n - 1));
            }
        }
        out.push_back(g);
    }
    return out;
}

std::vector<ThumbsRating> load_ratings(const std::string& path) {
    const std::vector<std::string> lines = read_lines(path);
    if (lines.empty()) throw ParseError(path + ": empty ratings file");
    const std::vector<std::string> header = split(trim(lines[0]), ',');
    const std::vector<std::string> expected = {
        "rater_id", "caption_id", "source", "dataset", "P", "R", "F", "C", "I"};
    if (header.size() != expected.size())
        throw ParseError(path + ": expected 9 header columns");
    for (std::size_t i = 0; i < expected.size(); ++i)
        if (trim(header[i]) != expected[i])
            throw ParseError(path + ": header column " + std::to_string(i + 1) +
                             " should be " + expected[i]);
    std::vector<ThumbsRating> out;
    for (std::size_t li = 1; li < lines.size(); ++li) {
        const std::string line = trim(lines[li]);
        if (line.empty()) continue;
        const std::vector<std::string> cols = split(line, ',');
        if (cols.size() != expected.size())
            throw ParseError(path + ":" + std::to_string(li + 1) +
                             ": wrong column count");
        ThumbsRating r;
        r.rater_id = trim(cols[0]);
        r.caption_id = trim(cols[1]);
        r.source = trim(cols[2]);
        r.dataset = trim(cols[3]);
        if (r.source != "expert" && r.source != "system")
            throw ValidationError(path + ":" + std::to_string(li + 1) +
                                  ": source must be expert or system");
        r.p = parse_double(cols[4], "P");
        r.r = parse_double(cols[5], "R");
        r.f = parse_double(cols[6], "F");
        r.c = parse_double(cols[7], "C");
        r.i = parse_double(cols[8], "I");
        validate(r);
        out.push_back(r);
    }
    return out;
}

void save_ratings(const std::string& path,
                  const std::vector<ThumbsRating>& ratings) {
    std::ostringstream ss;
    ss << "rater_id,caption_id,source,dataset,P,R,F,C,I\n";
    for (const ThumbsRating& r : ratings)
        ss << r.rater_id << ',' << r.caption_id << ',' << r.source << ','
           << r.dataset << ',' << r.p << ',' << r.r << ',' << r.f << ','
           << r.c << ',' << r.i << '\n';
    write_text_file(path, ss.str());
}

int significance_stars(double p) {
    if (p < 0.001) return 3;
    if (p < 0.01) return 2;
    if (p < 0.05) return 1;
    return 0;
}

std::vector<std::array<CorrelationCell, kNumAq>> correlation_matrix(
    const std::vector<std::array<double, kNumEvents>>& event_probs,
    const std::vector<std::array<double, kNumAq>>& aq_values) {
    if (event_probs.size() != aq_values.size())
        throw LengthError("correlation_matrix: row count mismatch");
    if (event_probs.size() < 3)
        throw LengthError("correlation_matrix needs n >= 3");
    const std::size_t n = event_probs.size();
    std::vector<std::array<CorrelationCell, kNumAq>> out(kNumEvents);
    for (int e = 0; e < kNumEvents; ++e) {
        std::vector<double> ev(n);
        for (std::size_t s = 0; s < n; ++s) ev[s] = event_probs[s][std::size_t(e)];
        for (int a = 0; a < kNumAq; ++a) {
            std::vector<double> aq(n);
            for (std::size_t s = 0; s < n; ++s) aq[s] = aq_values[s][std::size_t(a)];
            CorrelationCell& cell = out[std::size_t(e)][std::size_t(a)];
            try {
                const auto [rho, p] = spearman_rho(ev, aq);
                cell.rho = rho;
                cell.p = p;
                cell.stars = significance_stars(p);
            } catch (const ConstantInputError&) {
                cell.defined = false;
            }
        }
    }
    return out;
}

PairedComparison compare_sources(const std::vector<double>& expert,
                                 const std::vector<double>& system,
                                 const std::string& field) {
    if (expert.size() != system.size())
        throw LengthError("compare_sources: unpaired samples");
    std::vector<double> diff(expert.size());
    for (std::size_t i = 0; i < expert.size(); ++i)
        diff[i] = expert[i] - system[i];
    PairedComparison cmp;
    cmp.field = field;
    cmp.normality = shapiro_wilk(diff);
    if (cmp.normality.p_value < 0.05) {
        cmp.test = wilcoxon_signed_rank(expert, system);
        cmp.test.notes += cmp.test.notes.empty() ? "" : "; ";
        cmp.test.notes += "chosen because differences are non-normal";
    } else {
        cmp.test = paired_t(expert, system);
        cmp.test.notes += cmp.test.notes.empty() ? "" : "; ";
        cmp.test.notes += "chosen because differences look normal";
    }
    return cmp;
}

} // namespace ssc
