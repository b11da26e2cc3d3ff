#include "ingest/pseudo_label.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "common/domain.hpp"
#include "common/errors.hpp"
#include "common/textio.hpp"

namespace ssc {

TaggerProbFile load_tagger_probs(const std::string& path,
                                 const std::string& clip_id,
                                 int expected_classes) {
    const auto lines = read_lines(path);
    if (lines.empty())
        throw ParseError("tagger prob file '" + path + "' for clip '" + clip_id +
                         "' is empty");
    const auto head = split(trim(lines[0]), ' ');
    if (head.size() != 2 || head[0] != "granularity")
        throw ParseError("clip '" + clip_id +
                         "': first line must be 'granularity per_second' or "
                         "'granularity per_clip'");
    TaggerProbFile out;
    out.clip_id = clip_id;
    if (head[1] == "per_second")
        out.granularity = ProbGranularity::per_second;
    else if (head[1] == "per_clip")
        out.granularity = ProbGranularity::per_clip;
    else
        throw ParseError("clip '" + clip_id + "': unknown granularity '" +
                         head[1] + "'");

    for (std::size_t li = 1; li < lines.size(); ++li) {
        if (trim(lines[li]).empty()) continue;
        std::istringstream ss(lines[li]);
        std::vector<double> row;
        double v;
        while (ss >> v) {
            if (v < 0.0 || v > 1.0)
                throw ValidationError("clip '" + clip_id + "': probability " +
                                      std::to_string(v) + " outside [0, 1]");
            row.push_back(v);
        }
        if (int(row.size()) != expected_classes)
            throw ParseError("clip '" + clip_id + "': row " +
                             std::to_string(li) + " has " +
                             std::to_string(row.size()) + " values, expected " +
                             std::to_string(expected_classes));
        out.probs.push_back(std::move(row));
    }
    if (out.granularity == ProbGranularity::per_clip && out.probs.size() != 1)
        throw ParseError("clip '" + clip_id +
                         "': per_clip file must have exactly one row");
    return out;
}

void save_tagger_probs(const TaggerProbFile& file, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw IoError("cannot create '" + path + "'");
    f << "granularity "
      << (file.granularity == ProbGranularity::per_second ? "per_second"
                                                          : "per_clip")
      << "\n";
    for (const auto& row : file.probs) {
        for (std::size_t i = 0; i < row.size(); ++i)
            f << (i ? " " : "") << row[i];
        f << "\n";
    }
    if (!f) throw IoError("short write to '" + path + "'");
}

std::vector<int> binarize_probs(const std::vector<double>& probs,
                                double threshold) {
    std::vector<int> out(probs.size());
    for (std::size_t i = 0; i < probs.size(); ++i)
        out[i] = probs[i] > threshold ? 1 : 0;
    return out;
}

std::vector<std::pair<int, std::int64_t>> rank_event_occurrences(
    const std::vector<std::vector<int>>& hard_labels) {
    std::size_t k = hard_labels.empty() ? 0 : hard_labels[0].size();
    std::vector<std::pair<int, std::int64_t>> counts(k);
    for (std::size_t c = 0; c < k; ++c) counts[c] = {int(c), 0};
    for (const auto& row : hard_labels) {
        if (row.size() != k)
            throw ShapeError("inconsistent hard label row length " +
                             std::to_string(row.size()) + " vs " +
                             std::to_string(k));
        for (std::size_t c = 0; c < k; ++c) counts[c].second += row[c];
    }
    std::sort(counts.begin(), counts.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    return counts;
}

std::vector<std::string> select_target_events(
    const std::vector<std::pair<int, std::int64_t>>& ranked,
    const std::vector<int>& masker_classes,
    const std::vector<std::string>& class_names) {
    std::set<int> selected(masker_classes.begin(), masker_classes.end());
    for (const auto& [cls, count] : ranked) {
        (void)count;
        if (int(selected.size()) >= kNumEvents) break;
        selected.insert(cls);
    }
    if (int(selected.size()) < kNumEvents)
        throw VocabularyError("only " + std::to_string(selected.size()) +
                              " candidate classes, need " +
                              std::to_string(kNumEvents));

    // Order by rank position; maskers missing from the ranked list go last in
    // masker order.
    std::vector<int> ordered;
    for (const auto& [cls, count] : ranked) {
        (void)count;
        if (selected.count(cls)) ordered.push_back(cls);
    }
    for (int m : masker_classes)
        if (std::find(ordered.begin(), ordered.end(), m) == ordered.end())
            ordered.push_back(m);
    ordered.resize(kNumEvents);

    std::vector<std::string> names;
    names.reserve(kNumEvents);
    for (int cls : ordered) {
        if (cls >= 0 && cls < int(class_names.size()))
            names.push_back(class_names[cls]);
        else
            names.push_back("class_" + std::to_string(cls));
    }
    return names;
}

} // namespace ssc
