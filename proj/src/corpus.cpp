#include "tamlearn/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "tamlearn/error.hpp"
#include "tamlearn/random.hpp"
#include "tamlearn/utf8.hpp"

namespace tamlearn {

LabelSet::LabelSet(std::map<std::string, std::size_t> counts) {
  labels_.reserve(counts.size());
  counts_.reserve(counts.size());
  for (auto& [label, n] : counts) {
    labels_.push_back(label);
    counts_.push_back(n);
    total_ += n;
  }
}

std::optional<std::size_t> LabelSet::index_of(std::string_view label) const {
  auto it = std::lower_bound(labels_.begin(), labels_.end(), label);
  if (it == labels_.end() || *it != label) return std::nullopt;
  return static_cast<std::size_t>(it - labels_.begin());
}

std::size_t LabelSet::count(std::string_view label) const {
  auto i = index_of(label);
  return i ? counts_[*i] : 0;
}

std::size_t LabelSet::majority() const {
  if (labels_.empty()) throw ModelError("majority label of an empty label set");
  return argmax(std::span<const std::size_t>(counts_));
}

Dataset::Dataset(std::vector<Example> examples) : examples_(std::move(examples)) {
  std::map<std::string, std::size_t> counts;
  for (const auto& e : examples_) ++counts[e.label];
  inventory_ = LabelSet(std::move(counts));
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
  std::vector<Example> out;
  out.reserve(indices.size());
  for (auto i : indices) out.push_back(examples_.at(i));
  return Dataset(std::move(out));
}

namespace {

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    auto pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

}  // namespace

Dataset parse_corpus(std::string_view text) {
  std::vector<Example> examples;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;

    if (!utf8::is_valid(line)) throw EncodingError(line_no, "invalid UTF-8");
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;

    auto fields = split(line, '\t');
    if (fields.size() < 2 || fields.size() > 3) {
      throw ParseError(line_no, "expected 2 or 3 tab-separated fields, got " + std::to_string(fields.size()));
    }
    if (fields[0].empty()) throw ParseError(line_no, "empty label");

    Example ex{std::string(fields[0]), std::string(fields[1]), std::nullopt};
    if (fields.size() == 3) {
      std::vector<std::string> tokens;
      for (auto tok : split(fields[2], ' ')) {
        if (!tok.empty()) tokens.emplace_back(tok);
      }
      ex.tokens = std::move(tokens);
    }
    examples.push_back(std::move(ex));
  }
  return Dataset(std::move(examples));
}

std::string serialize_corpus(const Dataset& dataset) {
  auto bad = [](std::string_view s, std::string_view forbidden) {
    return s.find_first_of(forbidden) != std::string_view::npos;
  };
  std::string out;
  for (const auto& e : dataset.examples()) {
    if (e.label.empty() || e.label.front() == '#' || bad(e.label, "\t\r\n") || bad(e.sentence, "\t\r\n")) {
      throw ArgumentError("example cannot be written to a corpus file: '" + e.label + "'");
    }
    if (e.tokens) {
      for (const auto& t : *e.tokens) {
        if (t.empty() || bad(t, " \t\r\n")) throw ArgumentError("token cannot be written to a corpus file");
      }
    }
    out += e.label;
    out += '\t';
    out += e.sentence;
    if (e.tokens) {
      out += '\t';
      for (std::size_t i = 0; i < e.tokens->size(); ++i) {
        if (i) out += ' ';
        out += (*e.tokens)[i];
      }
    }
    out += '\n';
  }
  return out;
}

Dataset read_corpus(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open corpus file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_corpus(ss.str());
}

void write_corpus(const Dataset& dataset, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write corpus file: " + path);
  out << serialize_corpus(dataset);
}

// ---------------------------------------------------------------------------

CategorySpec parse_category_descriptor(std::string_view label) {
  if (label.empty()) throw DescriptorError("empty category descriptor");
  CategorySpec spec;
  bool saw_tense = false;
  std::size_t n_tokens = 0;
  for (auto tok : split(label, '+')) {
    ++n_tokens;
    auto aux = std::find(std::begin(kAuxiliaries), std::end(kAuxiliaries), tok);
    if (aux != std::end(kAuxiliaries)) {
      if (!spec.auxiliaries.emplace(tok).second) {
        throw DescriptorError("duplicate auxiliary '" + std::string(tok) + "'");
      }
    } else if (tok == "present" || tok == "past") {
      if (saw_tense) throw DescriptorError("more than one tense in '" + std::string(label) + "'");
      saw_tense = true;
      spec.tense = tok == "past" ? Tense::Past : Tense::Present;
    } else if (tok == "progressive") {
      if (spec.progressive) throw DescriptorError("duplicate 'progressive'");
      spec.progressive = true;
    } else if (tok == "perfect") {
      if (spec.perfect) throw DescriptorError("duplicate 'perfect'");
      spec.perfect = true;
    } else if (tok == "imperative") {
      spec.imperative = true;
    } else {
      throw DescriptorError("unknown descriptor token '" + std::string(tok) + "'");
    }
  }
  if (spec.imperative && n_tokens > 1) {
    throw DescriptorError("'imperative' cannot be combined with other tokens");
  }
  return spec;
}

std::string format_category_descriptor(const CategorySpec& spec) {
  if (spec.imperative) return "imperative";
  std::string out;
  auto add = [&](std::string_view t) {
    if (!out.empty()) out += '+';
    out += t;
  };
  for (auto aux : kAuxiliaries) {
    if (spec.auxiliaries.count(std::string(aux))) add(aux);
  }
  add(spec.tense == Tense::Past ? "past" : "present");
  if (spec.progressive) add("progressive");
  if (spec.perfect) add("perfect");
  return out;
}

// ---------------------------------------------------------------------------

std::vector<std::size_t> FoldPlan::fold(std::size_t k) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    if (assignment[i] == k) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> FoldPlan::complement(std::size_t k) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    if (assignment[i] != k) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> FoldPlan::fold_sizes() const {
  std::vector<std::size_t> sizes(n_folds, 0);
  for (auto f : assignment) ++sizes[f];
  return sizes;
}

FoldPlan split_folds(std::size_t n_examples, std::size_t n_folds, std::uint64_t seed) {
  if (n_folds < 2) throw ArgumentError("n_folds must be at least 2");
  if (n_examples == 0) throw ArgumentError("cannot split an empty dataset");
  if (n_folds > n_examples) {
    throw ArgumentError("n_folds (" + std::to_string(n_folds) + ") exceeds number of examples (" +
                        std::to_string(n_examples) + ")");
  }
  std::vector<std::size_t> order(n_examples);
  for (std::size_t i = 0; i < n_examples; ++i) order[i] = i;
  Rng rng(seed);
  shuffle(order, rng);

  FoldPlan plan;
  plan.n_folds = n_folds;
  plan.seed = seed;
  plan.assignment.assign(n_examples, 0);
  for (std::size_t pos = 0; pos < n_examples; ++pos) plan.assignment[order[pos]] = pos % n_folds;
  return plan;
}

FoldPlan split_folds(const Dataset& dataset, std::size_t n_folds, std::uint64_t seed) {
  return split_folds(dataset.size(), n_folds, seed);
}

}  // namespace tamlearn
