#include "memext/analysis.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace memext {

double HeatmapSeries::value_at(std::size_t char_pos) const {
    if (char_pos >= char_len || runs.empty()) return 0.0;
    auto it = std::upper_bound(runs.begin(), runs.end(), char_pos,
                               [](std::size_t pos, const auto& run) { return pos < run.first; });
    if (it == runs.begin()) return 0.0;
    return std::prev(it)->second;
}

std::vector<MemorizedSpan> merge_spans(std::span<const ScoredExample> scores, double threshold) {
    std::vector<const ScoredExample*> kept;
    for (const ScoredExample& s : scores) {
        if (s.prob >= threshold) kept.push_back(&s);
    }
    std::sort(kept.begin(), kept.end(), [](const ScoredExample* a, const ScoredExample* b) {
        if (a->doc_id != b->doc_id) return a->doc_id < b->doc_id;
        if (a->char_start != b->char_start) return a->char_start < b->char_start;
        return a->char_end < b->char_end;
    });

    std::vector<MemorizedSpan> spans;
    for (const ScoredExample* s : kept) {
        if (!spans.empty() && spans.back().doc_id == s->doc_id &&
            s->char_start <= spans.back().char_end) {
            MemorizedSpan& cur = spans.back();
            cur.char_end = std::max(cur.char_end, s->char_end);
            cur.max_prob = std::max(cur.max_prob, s->prob);
            ++cur.example_count;
        } else {
            spans.push_back(MemorizedSpan{s->doc_id, s->char_start, s->char_end, s->prob, 1});
        }
    }
    return spans;
}

double coverage(std::span<const MemorizedSpan> spans, const BookDocument& doc) {
    std::size_t covered = 0;
    for (const MemorizedSpan& span : spans) {
        if (span.char_start >= span.char_end || span.char_end > doc.char_len) {
            throw std::invalid_argument("coverage: span out of document bounds");
        }
        covered += span.char_end - span.char_start;
    }
    if (doc.char_len == 0) return 0.0;
    return static_cast<double>(covered) / static_cast<double>(doc.char_len);
}

HeatmapSeries heatmap(std::span<const ScoredExample> scores, const BookDocument& doc) {
    // Sweep over interval endpoints with a multiset of live probabilities.
    struct Event {
        std::size_t pos;
        double prob;
        bool open;
    };
    std::vector<Event> events;
    for (const ScoredExample& s : scores) {
        std::size_t start = std::min(s.suffix_char_start, doc.char_len);
        std::size_t end = std::min(s.char_end, doc.char_len);
        if (start >= end) continue;
        events.push_back(Event{start, s.prob, true});
        events.push_back(Event{end, s.prob, false});
    }
    std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
        if (a.pos != b.pos) return a.pos < b.pos;
        return a.open > b.open;  // opens first so touching intervals chain
    });

    HeatmapSeries series;
    series.doc_id = doc.doc_id;
    series.char_len = doc.char_len;

    std::multiset<double> live;
    double current = 0.0;
    std::size_t i = 0;
    if (doc.char_len > 0) series.runs.emplace_back(0, 0.0);
    while (i < events.size()) {
        std::size_t pos = events[i].pos;
        while (i < events.size() && events[i].pos == pos) {
            if (events[i].open) {
                live.insert(events[i].prob);
            } else {
                live.erase(live.find(events[i].prob));
            }
            ++i;
        }
        double value = live.empty() ? 0.0 : *live.rbegin();
        if (value != current) {
            if (!series.runs.empty() && series.runs.back().first == pos) {
                series.runs.back().second = value;
            } else {
                series.runs.emplace_back(pos, value);
            }
            current = value;
        }
    }
    return series;
}

std::map<double, double> coverage_report(std::span<const ScoredExample> scores,
                                         const BookDocument& doc,
                                         std::span<const double> thresholds) {
    std::map<double, double> report;
    for (double t : thresholds) {
        std::vector<MemorizedSpan> spans = merge_spans(scores, t);
        report[t] = coverage(spans, doc);
    }
    return report;
}

std::string heatmap_csv(const HeatmapSeries& series) {
    std::ostringstream out;
    out << "char_pos,max_prob\n";
    for (const auto& [pos, value] : series.runs) {
        out << pos << ',' << format_double(value) << '\n';
    }
    return out.str();
}

}  // namespace memext
