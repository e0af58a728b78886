#include "viz.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "error.hpp"

namespace dlpkit::viz {

const char* bar_class_name(BarClass c) {
  switch (c) {
    case BarClass::TestedRefuted:
      return "tested-refuted";
    case BarClass::InferredRefuted:
      return "inferred-refuted";
    case BarClass::TestedVerified:
      return "tested-verified";
    case BarClass::InferredVerified:
      return "inferred-verified";
    case BarClass::Untested:
      return "untested";
  }
  return "?";
}

namespace {

struct Element {
  std::string id;
  std::optional<lattice::BoolVec> vec;
  BarClass cls = BarClass::Untested;
  std::optional<std::int64_t> forced_by;
  std::int64_t first_seq = 0;
  std::optional<std::int64_t> parent;  // lineage for model traces
  double level = 0;
};

struct Classified {
  std::vector<Element> elements;
  bool lattice = false;  // every step carries a vector
  int n = 0;             // lattice dimension when lattice
};

BarClass classify(int verdict, trace::Source source) {
  if (source == trace::Source::Tested)
    return verdict ? BarClass::TestedVerified : BarClass::TestedRefuted;
  return verdict ? BarClass::InferredVerified : BarClass::InferredRefuted;
}

Classified classify_trace(const trace::Trace& trace) {
  Classified out;
  out.lattice = !trace.steps.empty();
  for (const trace::Step& s : trace.steps)
    if (!s.vec) out.lattice = false;

  std::map<std::string, std::size_t> index;
  for (const trace::Step& s : trace.steps) {
    auto it = index.find(s.id);
    if (it == index.end()) {
      Element e;
      e.id = s.id;
      if (s.vec) {
        e.vec = lattice::BoolVec::parse(*s.vec);
        out.n = std::max(out.n, e.vec->n);
      }
      e.cls = classify(s.verdict, s.source);
      e.forced_by = s.forced_by;
      e.first_seq = s.seq;
      e.parent = s.parent;
      e.level = s.level.value_or(0);
      index.emplace(s.id, out.elements.size());
      out.elements.push_back(std::move(e));
    } else {
      Element& e = out.elements[it->second];
      int old_verdict = e.cls == BarClass::TestedVerified || e.cls == BarClass::InferredVerified;
      require(old_verdict == s.verdict, Errc::invalid_argument,
              "malformed trace: element " + s.id + " has conflicting verdicts");
      // a later tested event upgrades an inferred one
      if (s.source == trace::Source::Tested) e.cls = classify(s.verdict, s.source);
    }
  }
  for (const Element& e : out.elements) {
    if (e.forced_by) {
      require(*e.forced_by >= 0 &&
                  *e.forced_by < static_cast<std::int64_t>(trace.steps.size()) &&
                  trace.steps[static_cast<std::size_t>(*e.forced_by)].source ==
                      trace::Source::Tested,
              Errc::invalid_argument,
              "malformed trace: inferred element " + e.id + " has no tested forcer");
    }
  }
  return out;
}

bool is_verified(BarClass c) {
  return c == BarClass::TestedVerified || c == BarClass::InferredVerified;
}
bool is_refuted(BarClass c) {
  return c == BarClass::TestedRefuted || c == BarClass::InferredRefuted;
}

void check_monotone_lattice(const Classified& cl) {
  for (const Element& a : cl.elements) {
    if (!is_verified(a.cls)) continue;
    for (const Element& b : cl.elements) {
      if (!is_refuted(b.cls)) continue;
      if (a.vec->n == b.vec->n && lattice::vec_leq(*a.vec, *b.vec))
        fail(Errc::inconsistent, "monotone-inconsistent trace: " + a.id +
                                     " verified below refuted " + b.id);
    }
  }
}

// Lineage order for model traces: ancestors are more general than their
// refinements. A verified step under a refuted ancestor is inconsistent.
void check_monotone_lineage(const trace::Trace& trace) {
  for (const trace::Step& s : trace.steps) {
    if (!s.verdict) continue;
    std::optional<std::int64_t> up = s.parent;
    while (up) {
      const trace::Step& anc = trace.steps[static_cast<std::size_t>(*up)];
      require(anc.verdict == 1, Errc::inconsistent,
              "monotone-inconsistent trace: " + s.id + " verified under refuted " + anc.id);
      up = anc.parent;
    }
  }
}

}  // namespace

std::string render_trace(const trace::Trace& trace, Format format, Arrangement arrangement,
                         std::optional<int> highlight_weight) {
  Classified cl = classify_trace(trace);

  std::vector<Element> columns = cl.elements;
  if (cl.lattice && cl.n >= 1 && cl.n <= 6) {
    // one column per lattice element; untouched ones are drawn untested
    std::map<std::uint32_t, bool> touched;
    for (const Element& e : columns) touched[e.vec->word] = true;
    for (std::uint32_t w = 0; w < (1u << cl.n); ++w) {
      if (touched.count(w)) continue;
      Element e;
      e.vec = lattice::BoolVec(cl.n, w);
      e.id = e.vec->str();
      e.cls = BarClass::Untested;
      e.first_seq = static_cast<std::int64_t>(trace.steps.size()) + w;
      columns.push_back(std::move(e));
    }
  }

  if (arrangement == Arrangement::Chronological) {
    std::sort(columns.begin(), columns.end(),
              [](const Element& a, const Element& b) { return a.first_seq < b.first_seq; });
  } else if (cl.lattice) {
    std::sort(columns.begin(), columns.end(), [](const Element& a, const Element& b) {
      if (a.vec->weight() != b.vec->weight()) return a.vec->weight() < b.vec->weight();
      return a.id < b.id;
    });
  } else {
    std::sort(columns.begin(), columns.end(), [](const Element& a, const Element& b) {
      if (a.level != b.level) return a.level > b.level;
      return a.id < b.id;
    });
  }

  auto highlighted = [&](const Element& e) {
    return highlight_weight && e.vec && e.vec->weight() == *highlight_weight;
  };

  if (format == Format::Text) {
    std::ostringstream out;
    out << "bar diagram: " << columns.size() << " columns ("
        << (arrangement == Arrangement::Chronological ? "chronological" : "pareto") << ")\n";
    for (const Element& e : columns) {
      out << e.id << '\t' << bar_class_name(e.cls);
      if (e.forced_by) out << "\tforced_by=" << *e.forced_by;
      if (highlighted(e)) out << "\t*";
      out << '\n';
    }
    return out.str();
  }

  const int col_w = 22, bar_h = 90, top = 12, label_h = 64;
  int width = static_cast<int>(columns.size()) * col_w + 8;
  int height = top + bar_h + label_h;
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
  for (std::size_t i = 0; i < columns.size(); ++i) {
    const Element& e = columns[i];
    const char* fill = "#ffffff";
    switch (e.cls) {
      case BarClass::TestedRefuted:
        fill = "#d32f2f";
        break;
      case BarClass::InferredRefuted:
        fill = "#f4c430";
        break;
      case BarClass::TestedVerified:
        fill = "#111111";
        break;
      case BarClass::InferredVerified:
        fill = "#9e9e9e";
        break;
      case BarClass::Untested:
        fill = "#ffffff";
        break;
    }
    int x = static_cast<int>(i) * col_w + 4;
    out << "  <rect x=\"" << x << "\" y=\"" << top << "\" width=\"" << col_w - 6
        << "\" height=\"" << bar_h << "\" fill=\"" << fill << "\" stroke=\""
        << (highlighted(e) ? "#1976d2" : "#444444") << "\" stroke-width=\""
        << (highlighted(e) ? 3 : 1) << "\"><title>" << e.id << " (" << bar_class_name(e.cls)
        << ")</title></rect>\n";
    out << "  <text x=\"" << x + (col_w - 6) / 2 << "\" y=\"" << top + bar_h + 10
        << "\" font-size=\"8\" text-anchor=\"start\" transform=\"rotate(60 " << x + (col_w - 6) / 2
        << " " << top + bar_h + 10 << ")\">" << e.id << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

namespace {

// Complete restorations determine every lattice element, so consistency and
// border extraction reduce to immediate-edge checks: the refuted set of a
// monotone function is a down-set and the verified set an up-set.
ParetoBorder pareto_border_complete(const Classified& cl) {
  ParetoBorder border;
  std::uint32_t size = 1u << cl.n;
  std::vector<std::uint8_t> value(size, 0);
  std::vector<std::uint8_t> have(size, 0);
  for (const Element& e : cl.elements) {
    value[e.vec->word] = is_verified(e.cls) ? 1 : 0;
    have[e.vec->word] = 1;
  }
  for (std::uint32_t w = 0; w < size; ++w)
    for (int b = 0; b < cl.n; ++b) {
      std::uint32_t up = w | (1u << b);
      if (up != w && value[w] > value[up])
        fail(Errc::inconsistent, "monotone-inconsistent trace: " +
                                     lattice::BoolVec(cl.n, w).str() +
                                     " verified below refuted " +
                                     lattice::BoolVec(cl.n, up).str());
    }
  for (std::uint32_t w = 0; w < size; ++w) {
    if (value[w]) {
      bool minimal = true;
      for (int b = 0; b < cl.n && minimal; ++b)
        if ((w >> b & 1) && value[w & ~(1u << b)]) minimal = false;
      if (minimal) {
        border.lower.emplace_back(cl.n, w);
        border.lower_ids.push_back(lattice::BoolVec(cl.n, w).str());
      }
    } else {
      bool maximal = true;
      for (int b = 0; b < cl.n && maximal; ++b) {
        std::uint32_t up = w | (1u << b);
        if (up != w && !value[up]) maximal = false;
      }
      if (maximal) {
        border.upper.emplace_back(cl.n, w);
        border.upper_ids.push_back(lattice::BoolVec(cl.n, w).str());
      }
    }
  }
  std::sort(border.lower_ids.begin(), border.lower_ids.end());
  std::sort(border.upper_ids.begin(), border.upper_ids.end());
  return border;
}

}  // namespace

ParetoBorder pareto_border(const trace::Trace& trace) {
  Classified cl = classify_trace(trace);
  ParetoBorder border;

  if (cl.lattice && cl.n >= 1 &&
      cl.elements.size() == (1ull << cl.n)) {
    bool untested = false;
    for (const Element& e : cl.elements)
      if (e.cls == BarClass::Untested) untested = true;
    if (!untested) return pareto_border_complete(cl);
  }

  if (cl.lattice) {
    check_monotone_lattice(cl);
    std::vector<const Element*> verified, refuted;
    for (const Element& e : cl.elements) {
      if (is_verified(e.cls)) verified.push_back(&e);
      if (is_refuted(e.cls)) refuted.push_back(&e);
    }
    for (const Element* v : verified) {
      bool minimal = true;
      for (const Element* w : verified)
        if (w != v && lattice::vec_leq(*w->vec, *v->vec) && !(w->vec->word == v->vec->word))
          minimal = false;
      if (minimal) {
        border.lower.push_back(*v->vec);
        border.lower_ids.push_back(v->id);
      }
    }
    for (const Element* v : refuted) {
      bool maximal = true;
      for (const Element* w : refuted)
        if (w != v && lattice::vec_leq(*v->vec, *w->vec) && !(w->vec->word == v->vec->word))
          maximal = false;
      if (maximal) {
        border.upper.push_back(*v->vec);
        border.upper_ids.push_back(v->id);
      }
    }
    auto by_word = [](const lattice::BoolVec& a, const lattice::BoolVec& b) {
      return a.word < b.word;
    };
    std::sort(border.lower.begin(), border.lower.end(), by_word);
    std::sort(border.upper.begin(), border.upper.end(), by_word);
    std::sort(border.lower_ids.begin(), border.lower_ids.end());
    std::sort(border.upper_ids.begin(), border.upper_ids.end());
    return border;
  }

  check_monotone_lineage(trace);
  // lineage order: minimal verified = verified without verified children,
  // maximal refuted = refuted without refuted ancestors
  std::vector<bool> has_verified_child(trace.steps.size(), false);
  for (const trace::Step& s : trace.steps)
    if (s.verdict && s.parent) has_verified_child[static_cast<std::size_t>(*s.parent)] = true;
  for (const trace::Step& s : trace.steps) {
    if (s.verdict && !has_verified_child[static_cast<std::size_t>(s.seq)])
      border.lower_ids.push_back(s.id);
    if (!s.verdict) {
      bool refuted_ancestor = false;
      std::optional<std::int64_t> up = s.parent;
      while (up) {
        const trace::Step& anc = trace.steps[static_cast<std::size_t>(*up)];
        if (!anc.verdict) refuted_ancestor = true;
        up = anc.parent;
      }
      if (!refuted_ancestor) border.upper_ids.push_back(s.id);
    }
  }
  std::sort(border.lower_ids.begin(), border.lower_ids.end());
  border.lower_ids.erase(std::unique(border.lower_ids.begin(), border.lower_ids.end()),
                         border.lower_ids.end());
  std::sort(border.upper_ids.begin(), border.upper_ids.end());
  border.upper_ids.erase(std::unique(border.upper_ids.begin(), border.upper_ids.end()),
                         border.upper_ids.end());
  return border;
}

}  // namespace dlpkit::viz
