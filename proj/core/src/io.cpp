#include "cast/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace cast::io {

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw cast::io_error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t nl = text.find('\n', start);
        if (nl == std::string::npos) {
            lines.push_back(text.substr(start));
            break;
        }
        std::string line = text.substr(start, nl - start);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(std::move(line));
        start = nl + 1;
    }
    return lines;
}

/// Whitespace tokenizer with double-quoted fields ("\\" and "\"" escapes).
class Tokenizer {
public:
    Tokenizer(const std::string& path, std::size_t line_no, const std::string& line)
        : path_(path), line_no_(line_no), line_(line) {}

    bool done() {
        skip_spaces();
        return pos_ >= line_.size();
    }

    std::string next(const char* what) {
        skip_spaces();
        if (pos_ >= line_.size()) fail(std::string("missing field: ") + what);
        if (line_[pos_] == '"') return next_quoted(what);
        std::size_t start = pos_;
        while (pos_ < line_.size() && line_[pos_] != ' ' && line_[pos_] != '\t') ++pos_;
        return line_.substr(start, pos_ - start);
    }

    double next_real(const char* what) { return to_real(next(what), what); }

    long long next_int(const char* what) { return to_int(next(what), what); }

    void expect_end() {
        if (!done()) fail("trailing fields");
    }

    double to_real(const std::string& tok, const char* what) {
        double v = 0.0;
        auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (ec != std::errc{} || p != tok.data() + tok.size())
            fail(std::string("bad real for ") + what + ": '" + tok + "'");
        return v;
    }

    long long to_int(const std::string& tok, const char* what) {
        long long v = 0;
        auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (ec != std::errc{} || p != tok.data() + tok.size())
            fail(std::string("bad integer for ") + what + ": '" + tok + "'");
        return v;
    }

    [[noreturn]] void fail(const std::string& msg) { throw parse_error(path_, line_no_, msg); }

private:
    void skip_spaces() {
        while (pos_ < line_.size() && (line_[pos_] == ' ' || line_[pos_] == '\t')) ++pos_;
    }

    std::string next_quoted(const char* what) {
        ++pos_; // opening quote
        std::string out;
        while (pos_ < line_.size()) {
            char c = line_[pos_++];
            if (c == '\\') {
                if (pos_ >= line_.size()) fail(std::string("dangling escape in ") + what);
                out.push_back(line_[pos_++]);
            } else if (c == '"') {
                return out;
            } else {
                out.push_back(c);
            }
        }
        fail(std::string("unterminated quote in ") + what);
    }

    const std::string& path_;
    std::size_t line_no_;
    const std::string& line_;
    std::size_t pos_ = 0;
};

/// Parses a '#kind key=value ...' header line and checks the exact key list.
class Header {
public:
    Header(const std::string& path, const std::vector<std::string>& lines, const std::string& kind,
           const std::vector<std::string>& keys)
        : path_(path) {
        if (lines.empty()) throw parse_error(path, 1, "empty file, expected #" + kind + " header");
        Tokenizer tok(path, 1, lines.front());
        std::string tag = tok.next("header tag");
        if (tag != "#" + kind)
            tok.fail("expected '#" + kind + "' header, got '" + tag + "'");
        for (const auto& key : keys) {
            std::string field = tok.next(key.c_str());
            auto eq = field.find('=');
            if (eq == std::string::npos || field.substr(0, eq) != key)
                tok.fail("expected '" + key + "=...', got '" + field + "'");
            values_[key] = field.substr(eq + 1);
        }
        tok.expect_end();
    }

    const std::string& str(const std::string& key) const { return values_.at(key); }

    double real(const std::string& key) const {
        Tokenizer tok(path_, 1, values_.at(key));
        return tok.to_real(values_.at(key), key.c_str());
    }

    long long integer(const std::string& key) const {
        Tokenizer tok(path_, 1, values_.at(key));
        return tok.to_int(values_.at(key), key.c_str());
    }

private:
    std::string path_;
    std::map<std::string, std::string> values_;
};

class Writer {
public:
    explicit Writer(const std::string& path) : path_(path), out_(path, std::ios::binary) {
        if (!out_) throw cast::io_error("cannot write '" + path + "'");
    }

    void line(const std::string& s) { out_ << s << '\n'; }

    void finish() {
        out_.flush();
        if (!out_) throw cast::io_error("write failed for '" + path_ + "'");
    }

private:
    std::string path_;
    std::ofstream out_;
};

void check_finite(double v, const char* what) {
    if (!std::isfinite(v)) throw integrity_error(std::string(what) + " is not finite");
}

std::string kv(const std::string& key, const std::string& value) { return key + "=" + value; }

/// Trailing blank line tolerance: files end with '\n', so the splitter yields
/// one empty trailing entry that record loops must ignore.
bool blank(const std::string& line) { return line.empty(); }

} // namespace

std::string format_real(double v) {
    check_finite(v, "serialized real");
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 9);
    if (ec != std::errc{}) throw integrity_error("real formatting failed");
    return std::string(buf, p);
}

double parse_real(const std::string& token) {
    double v = 0.0;
    auto [p, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc{} || p != token.data() + token.size())
        throw integrity_error("bad real '" + token + "'");
    return v;
}

long long parse_integer(const std::string& token) {
    long long v = 0;
    auto [p, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc{} || p != token.data() + token.size())
        throw integrity_error("bad integer '" + token + "'");
    return v;
}

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '\n' || c == '\r') throw integrity_error("name contains a line break");
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

// -- proposals ----------------------------------------------------------------

ProposalFile load_proposals(const std::string& path, const IngestConfig& config) {
    auto lines = split_lines(read_file(path));
    Header h(path, lines, "proposals", {"frame_width", "frame_height", "sample_fps"});

    ProposalFile file;
    file.geometry.width = h.real("frame_width");
    file.geometry.height = h.real("frame_height");
    file.sample_fps = h.real("sample_fps");
    if (file.geometry.width <= 0 || file.geometry.height <= 0)
        throw parse_error(path, 1, "frame extents must be positive");
    if (file.sample_fps <= 0) throw parse_error(path, 1, "sample_fps must be positive");

    double frame_area = file.geometry.area();
    std::set<std::string> ids;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (blank(lines[i])) continue;
        Tokenizer tok(path, i + 1, lines[i]);
        Proposal p;
        p.proposal_id = tok.next("proposal_id");
        p.video_id = tok.next("video_id");
        p.shot_id = tok.next("shot_id");
        p.frame_index = static_cast<int>(tok.next_int("frame_index"));
        p.box.x = tok.next_real("x");
        p.box.y = tok.next_real("y");
        p.box.w = tok.next_real("w");
        p.box.h = tok.next_real("h");
        p.confidence = tok.next_real("confidence");
        tok.expect_end();

        if (p.frame_index < 0) tok.fail("frame_index must be >= 0");
        if (p.confidence < 0.0 || p.confidence > 1.0) tok.fail("confidence outside [0,1]");
        if (p.box.w <= 0.0 || p.box.h <= 0.0) tok.fail("box extents must be positive");

        // Clamp the box to the frame; a box entirely outside is malformed.
        double x2 = std::min(p.box.right(), file.geometry.width);
        double y2 = std::min(p.box.bottom(), file.geometry.height);
        p.box.x = std::max(p.box.x, 0.0);
        p.box.y = std::max(p.box.y, 0.0);
        if (x2 - p.box.x <= 0.0 || y2 - p.box.y <= 0.0)
            tok.fail("box lies outside the frame");
        p.box.w = x2 - p.box.x;
        p.box.h = y2 - p.box.y;

        if (!ids.insert(p.proposal_id).second)
            throw integrity_error(path + ": duplicate proposal id '" + p.proposal_id + "'");
        if (file.video_id.empty())
            file.video_id = p.video_id;
        else if (file.video_id != p.video_id)
            throw integrity_error(path + ": mixed video ids '" + file.video_id + "' and '" +
                                  p.video_id + "'");

        if (p.confidence < config.min_confidence) continue;
        if (p.box.area() < config.min_area_fraction * frame_area) continue;
        file.proposals.push_back(std::move(p));
    }
    return file;
}

void save_proposals(const std::string& path, const ProposalFile& file) {
    Writer w(path);
    w.line("#proposals " + kv("frame_width", format_real(file.geometry.width)) + " " +
           kv("frame_height", format_real(file.geometry.height)) + " " +
           kv("sample_fps", format_real(file.sample_fps)));
    for (const auto& p : file.proposals) {
        detail::check_identifier(p.proposal_id, "proposal id");
        detail::check_identifier(p.shot_id, "shot id");
        w.line(p.proposal_id + " " + p.video_id + " " + p.shot_id + " " +
               std::to_string(p.frame_index) + " " + format_real(p.box.x) + " " +
               format_real(p.box.y) + " " + format_real(p.box.w) + " " + format_real(p.box.h) +
               " " + format_real(p.confidence));
    }
    w.finish();
}

// -- shots ---------------------------------------------------------------------

ShotList load_shots(const std::string& path) {
    auto lines = split_lines(read_file(path));
    Header h(path, lines, "shots", {"video", "last_frame", "sample_fps"});

    ShotList list;
    list.video_id = h.str("video");
    list.last_frame = static_cast<int>(h.integer("last_frame"));
    list.sample_fps = h.real("sample_fps");

    std::vector<int> boundaries;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (blank(lines[i])) continue;
        Tokenizer tok(path, i + 1, lines[i]);
        boundaries.push_back(static_cast<int>(tok.next_int("boundary")));
        tok.expect_end();
    }
    if (boundaries.size() < 2) throw integrity_error(path + ": need at least two boundaries");
    for (std::size_t i = 0; i + 1 < boundaries.size(); ++i) {
        if (boundaries[i + 1] <= boundaries[i])
            throw integrity_error(path + ": boundaries must be strictly ascending");
        Shot s;
        char buf[16];
        std::snprintf(buf, sizeof(buf), "s%04zu", i);
        s.shot_id = buf;
        s.start_frame = boundaries[i];
        s.end_frame = boundaries[i + 1] - 1;
        s.sample_fps = list.sample_fps;
        list.shots.push_back(std::move(s));
    }
    if (boundaries.front() != 0)
        throw integrity_error(path + ": first boundary must be 0");
    if (boundaries.back() != list.last_frame + 1)
        throw integrity_error(path + ": last boundary must be last_frame + 1");
    list.validate();
    return list;
}

void save_shots(const std::string& path, const ShotList& shots) {
    shots.validate();
    Writer w(path);
    w.line("#shots " + kv("video", shots.video_id) + " " +
           kv("last_frame", std::to_string(shots.last_frame)) + " " +
           kv("sample_fps", format_real(shots.sample_fps)));
    for (const auto& s : shots.shots) w.line(std::to_string(s.start_frame));
    w.line(std::to_string(shots.last_frame + 1));
    w.finish();
}

// -- embeddings ------------------------------------------------------------------

EmbeddingSet load_embeddings(const std::string& path) {
    auto lines = split_lines(read_file(path));
    Header h(path, lines, "embeddings", {"dimension", "space"});

    EmbeddingSet set;
    set.dimension = static_cast<int>(h.integer("dimension"));
    set.space_tag = space_tag_from_string(h.str("space"));
    if (set.dimension <= 0) throw parse_error(path, 1, "dimension must be positive");

    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (blank(lines[i])) continue;
        Tokenizer tok(path, i + 1, lines[i]);
        std::string pid = tok.next("proposal_id");
        std::vector<double> v;
        v.reserve(static_cast<std::size_t>(set.dimension));
        for (int d = 0; d < set.dimension; ++d) v.push_back(tok.next_real("component"));
        tok.expect_end();
        for (double x : v)
            if (!std::isfinite(x)) tok.fail("non-finite component");
        try {
            set.insert(pid, std::move(v));
        } catch (const integrity_error& e) {
            throw integrity_error(path + ":" + std::to_string(i + 1) + ": " + e.what());
        }
    }
    return set;
}

void save_embeddings(const std::string& path, const EmbeddingSet& set) {
    Writer w(path);
    w.line("#embeddings " + kv("dimension", std::to_string(set.dimension)) + " " +
           kv("space", to_string(set.space_tag)));
    for (const auto& [pid, v] : set.entries) {
        std::string line = pid;
        for (double x : v) {
            line.push_back(' ');
            line += format_real(x);
        }
        w.line(line);
    }
    w.finish();
}

// -- tracklets ---------------------------------------------------------------------

TrackletFile load_tracklets(const std::string& path, const ProposalFile* context,
                            int skip_window) {
    auto lines = split_lines(read_file(path));
    Header h(path, lines, "tracklets", {"video", "count"});

    TrackletFile file;
    file.video_id = h.str("video");
    auto index = context ? context->index() : std::map<std::string, const Proposal*>{};

    std::set<std::string> ids;
    std::set<std::string> used;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (blank(lines[i])) continue;
        Tokenizer tok(path, i + 1, lines[i]);
        Tracklet t;
        t.tracklet_id = tok.next("tracklet_id");
        t.shot_id = tok.next("shot_id");
        t.significance = tok.next_real("significance");
        auto count = tok.next_int("member_count");
        if (count <= 0) tok.fail("tracklet must have at least one member");
        for (long long k = 0; k < count; ++k) t.proposal_ids.push_back(tok.next("member"));
        tok.expect_end();

        if (t.significance < 0.0 || t.significance > 1.0)
            throw integrity_error(path + ": tracklet '" + t.tracklet_id +
                                  "' significance outside [0,1]");
        if (!ids.insert(t.tracklet_id).second)
            throw integrity_error(path + ": duplicate tracklet id '" + t.tracklet_id + "'");
        for (const auto& pid : t.proposal_ids)
            if (!used.insert(pid).second)
                throw integrity_error(path + ": proposal '" + pid +
                                      "' appears in more than one tracklet");

        if (context) {
            int prev_frame = -1;
            for (const auto& pid : t.proposal_ids) {
                auto it = index.find(pid);
                if (it == index.end())
                    throw integrity_error(path + ": unknown proposal '" + pid + "'");
                const Proposal& p = *it->second;
                if (p.shot_id != t.shot_id)
                    throw integrity_error(path + ": tracklet '" + t.tracklet_id +
                                          "' member from a different shot");
                if (p.frame_index <= prev_frame)
                    throw integrity_error(path + ": tracklet '" + t.tracklet_id +
                                          "' frames are not strictly increasing");
                if (skip_window > 0 && prev_frame >= 0 &&
                    p.frame_index - prev_frame > skip_window)
                    throw integrity_error(path + ": tracklet '" + t.tracklet_id +
                                          "' gap exceeds the skip window");
                prev_frame = p.frame_index;
            }
        }
        file.tracklets.push_back(std::move(t));
    }
    if (static_cast<long long>(file.tracklets.size()) != h.integer("count"))
        throw integrity_error(path + ": tracklet count does not match header");
    return file;
}

void save_tracklets(const std::string& path, const TrackletFile& file) {
    Writer w(path);
    w.line("#tracklets " + kv("video", file.video_id) + " " +
           kv("count", std::to_string(file.tracklets.size())));
    for (const auto& t : file.tracklets) {
        if (t.significance < 0.0 || t.significance > 1.0)
            throw integrity_error("tracklet significance outside [0,1]");
        std::string line = t.tracklet_id + " " + t.shot_id + " " + format_real(t.significance) +
                           " " + std::to_string(t.proposal_ids.size());
        for (const auto& pid : t.proposal_ids) {
            line.push_back(' ');
            line += pid;
        }
        w.line(line);
    }
    w.finish();
}

// -- triplets -----------------------------------------------------------------------

std::vector<Triplet> load_triplets(const std::string& path, const TripletContext& context) {
    auto lines = split_lines(read_file(path));
    Header h(path, lines, "triplets", {"count"});

    // Optional validation context: tracklet membership and frame lookup.
    std::map<std::string, std::size_t> tracklet_of;
    if (context.tracklets)
        for (std::size_t t = 0; t < context.tracklets->size(); ++t)
            for (const auto& pid : (*context.tracklets)[t].proposal_ids) tracklet_of[pid] = t;
    auto index = context.proposals ? context.proposals->index()
                                   : std::map<std::string, const Proposal*>{};

    std::vector<Triplet> out;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (blank(lines[i])) continue;
        Tokenizer tok(path, i + 1, lines[i]);
        Triplet t;
        t.anchor = tok.next("anchor");
        t.positive = tok.next("positive");
        t.negative = tok.next("negative");
        tok.expect_end();
        if (t.anchor == t.positive)
            throw integrity_error(path + ": anchor equals positive");
        if (context.tracklets) {
            auto a = tracklet_of.find(t.anchor);
            auto p = tracklet_of.find(t.positive);
            auto n = tracklet_of.find(t.negative);
            if (a == tracklet_of.end() || p == tracklet_of.end() || n == tracklet_of.end())
                throw integrity_error(path + ": triplet member is not in any tracklet");
            if (a->second != p->second)
                throw integrity_error(path + ": anchor and positive are in different tracklets");
            if (a->second == n->second)
                throw integrity_error(path + ": anchor and negative share a tracklet");
        }
        if (context.proposals) {
            auto a = index.find(t.anchor);
            auto n = index.find(t.negative);
            if (a == index.end() || n == index.end())
                throw integrity_error(path + ": triplet references unknown proposal");
            if (a->second->frame_index != n->second->frame_index ||
                a->second->shot_id != n->second->shot_id)
                throw integrity_error(path + ": anchor and negative do not share a frame");
        }
        out.push_back(std::move(t));
    }
    if (static_cast<long long>(out.size()) != h.integer("count"))
        throw integrity_error(path + ": triplet count does not match header");
    return out;
}

void save_triplets(const std::string& path, const std::vector<Triplet>& triplets) {
    Writer w(path);
    w.line("#triplets " + kv("count", std::to_string(triplets.size())));
    for (const auto& t : triplets) w.line(t.anchor + " " + t.positive + " " + t.negative);
    w.finish();
}

// -- clusters ----------------------------------------------------------------------

ClusterSet load_clusters(const std::string& path,
                         const std::vector<std::string>* partition_over) {
    auto lines = split_lines(read_file(path));
    Header h(path, lines, "clusters", {"count", "noise_count"});

    ClusterSet set;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (blank(lines[i])) continue;
        Tokenizer tok(path, i + 1, lines[i]);
        std::string tag = tok.next("record tag");
        if (tag == "cluster") {
            Cluster c;
            c.cluster_id = tok.next("cluster_id");
            c.medoid = tok.next("medoid");
            auto count = tok.next_int("member_count");
            if (count <= 0) tok.fail("cluster must have at least one member");
            for (long long k = 0; k < count; ++k) {
                c.members.push_back(tok.next("member"));
                c.scores.push_back(tok.next_real("score"));
            }
            tok.expect_end();
            set.clusters.push_back(std::move(c));
        } else if (tag == "noise") {
            set.noise.push_back(tok.next("proposal_id"));
            tok.expect_end();
        } else {
            tok.fail("unknown record tag '" + tag + "'");
        }
    }
    if (static_cast<long long>(set.clusters.size()) != h.integer("count") ||
        static_cast<long long>(set.noise.size()) != h.integer("noise_count"))
        throw integrity_error(path + ": cluster/noise counts do not match header");
    set.validate();
    if (partition_over) {
        std::set<std::string> expect(partition_over->begin(), partition_over->end());
        std::set<std::string> got(set.noise.begin(), set.noise.end());
        for (const auto& c : set.clusters) got.insert(c.members.begin(), c.members.end());
        if (expect != got)
            throw integrity_error(path + ": clusters plus noise do not partition the proposals");
    }
    return set;
}

void save_clusters(const std::string& path, const ClusterSet& set) {
    set.validate();
    Writer w(path);
    w.line("#clusters " + kv("count", std::to_string(set.clusters.size())) + " " +
           kv("noise_count", std::to_string(set.noise.size())));
    for (const auto& c : set.clusters) {
        std::string line = "cluster " + c.cluster_id + " " + c.medoid + " " +
                           std::to_string(c.members.size());
        for (std::size_t i = 0; i < c.members.size(); ++i) {
            line += " " + c.members[i] + " ";
            line += format_real(c.scores.empty() ? 1.0 : c.scores[i]);
        }
        w.line(line);
    }
    for (const auto& n : set.noise) w.line("noise " + n);
    w.finish();
}

// -- dictionary ----------------------------------------------------------------------

std::vector<DictionaryEntry> load_dictionary(const std::string& path, const ClusterSet* context) {
    auto lines = split_lines(read_file(path));
    Header h(path, lines, "dictionary", {"count"});

    std::vector<DictionaryEntry> out;
    std::set<std::string> ids;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (blank(lines[i])) continue;
        Tokenizer tok(path, i + 1, lines[i]);
        std::string tag = tok.next("record tag");
        if (tag != "entry") tok.fail("expected 'entry'");
        DictionaryEntry e;
        e.entry_id = tok.next("entry_id");
        e.cluster_id = tok.next("cluster_id");
        e.representative = tok.next("representative");
        auto disc = tok.next_int("discarded");
        if (disc != 0 && disc != 1) tok.fail("discarded must be 0 or 1");
        e.discarded = disc == 1;
        std::string name = tok.next("name");
        e.name = name == "-" ? std::string{} : name;
        tok.expect_end();

        if (!ids.insert(e.entry_id).second)
            throw integrity_error(path + ": duplicate entry id '" + e.entry_id + "'");
        if (context) {
            const Cluster* c = nullptr;
            for (const auto& cand : context->clusters)
                if (cand.cluster_id == e.cluster_id) c = &cand;
            if (!c) throw integrity_error(path + ": entry references unknown cluster '" +
                                          e.cluster_id + "'");
            if (c->medoid != e.representative)
                throw integrity_error(path + ": representative of entry '" + e.entry_id +
                                      "' is not its cluster's medoid");
        }
        out.push_back(std::move(e));
    }
    if (static_cast<long long>(out.size()) != h.integer("count"))
        throw integrity_error(path + ": entry count does not match header");
    return out;
}

void save_dictionary(const std::string& path, const std::vector<DictionaryEntry>& entries) {
    Writer w(path);
    w.line("#dictionary " + kv("count", std::to_string(entries.size())));
    for (const auto& e : entries) {
        w.line("entry " + e.entry_id + " " + e.cluster_id + " " + e.representative + " " +
               (e.discarded ? "1" : "0") + " " + (e.name.empty() ? "-" : quote(e.name)));
    }
    w.finish();
}

// -- labels ------------------------------------------------------------------------

std::map<std::string, std::string> load_labels(const std::string& path) {
    auto lines = split_lines(read_file(path));
    Header h(path, lines, "labels", {"count"});
    std::map<std::string, std::string> out;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (blank(lines[i])) continue;
        Tokenizer tok(path, i + 1, lines[i]);
        std::string pid = tok.next("proposal_id");
        std::string label = tok.next("label");
        tok.expect_end();
        if (!out.emplace(pid, label).second)
            throw integrity_error(path + ": duplicate label for '" + pid + "'");
    }
    if (static_cast<long long>(out.size()) != h.integer("count"))
        throw integrity_error(path + ": label count does not match header");
    return out;
}

void save_labels(const std::string& path, const std::map<std::string, std::string>& labels) {
    Writer w(path);
    w.line("#labels " + kv("count", std::to_string(labels.size())));
    for (const auto& [pid, label] : labels) w.line(pid + " " + quote(label));
    w.finish();
}

// -- matrix / loss curve -------------------------------------------------------------

MatrixFile load_matrix(const std::string& path) {
    auto lines = split_lines(read_file(path));
    Header h(path, lines, "matrix", {"rows", "cols"});
    MatrixFile m;
    m.rows = static_cast<int>(h.integer("rows"));
    m.cols = static_cast<int>(h.integer("cols"));
    if (m.rows <= 0 || m.cols <= 0) throw parse_error(path, 1, "matrix extents must be positive");
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (blank(lines[i])) continue;
        Tokenizer tok(path, i + 1, lines[i]);
        for (int c = 0; c < m.cols; ++c) m.values.push_back(tok.next_real("matrix entry"));
        tok.expect_end();
    }
    if (m.values.size() != static_cast<std::size_t>(m.rows) * static_cast<std::size_t>(m.cols))
        throw integrity_error(path + ": matrix payload does not match extents");
    return m;
}

void save_matrix(const std::string& path, const MatrixFile& m) {
    if (m.values.size() != static_cast<std::size_t>(m.rows) * static_cast<std::size_t>(m.cols))
        throw integrity_error("matrix payload does not match extents");
    Writer w(path);
    w.line("#matrix " + kv("rows", std::to_string(m.rows)) + " " +
           kv("cols", std::to_string(m.cols)));
    for (int r = 0; r < m.rows; ++r) {
        std::string line;
        for (int c = 0; c < m.cols; ++c) {
            if (c) line.push_back(' ');
            line += format_real(m.values[static_cast<std::size_t>(r) * m.cols + c]);
        }
        w.line(line);
    }
    w.finish();
}

std::vector<double> load_loss_curve(const std::string& path) {
    auto lines = split_lines(read_file(path));
    Header h(path, lines, "losscurve", {"epochs"});
    std::vector<double> out;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (blank(lines[i])) continue;
        Tokenizer tok(path, i + 1, lines[i]);
        auto epoch = tok.next_int("epoch");
        double loss = tok.next_real("mean_loss");
        tok.expect_end();
        if (epoch != static_cast<long long>(out.size()) + 1) tok.fail("epochs must be sequential");
        out.push_back(loss);
    }
    if (static_cast<long long>(out.size()) != h.integer("epochs"))
        throw integrity_error(path + ": epoch count does not match header");
    return out;
}

void save_loss_curve(const std::string& path, const std::vector<double>& per_epoch_loss) {
    Writer w(path);
    w.line("#losscurve " + kv("epochs", std::to_string(per_epoch_loss.size())));
    for (std::size_t i = 0; i < per_epoch_loss.size(); ++i)
        w.line(std::to_string(i + 1) + " " + format_real(per_epoch_loss[i]));
    w.finish();
}

// -- rects ---------------------------------------------------------------------------

std::vector<FrameRect> load_rects(const std::string& path) {
    auto lines = split_lines(read_file(path));
    Header h(path, lines, "rects", {"count"});
    std::vector<FrameRect> out;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (blank(lines[i])) continue;
        Tokenizer tok(path, i + 1, lines[i]);
        FrameRect r;
        r.frame_index = static_cast<int>(tok.next_int("frame_index"));
        r.box.x = tok.next_real("x");
        r.box.y = tok.next_real("y");
        r.box.w = tok.next_real("w");
        r.box.h = tok.next_real("h");
        tok.expect_end();
        if (!r.box.valid()) tok.fail("rect extents must be positive");
        out.push_back(r);
    }
    if (static_cast<long long>(out.size()) != h.integer("count"))
        throw integrity_error(path + ": rect count does not match header");
    return out;
}

void save_rects(const std::string& path, const std::vector<FrameRect>& rects) {
    Writer w(path);
    w.line("#rects " + kv("count", std::to_string(rects.size())));
    for (const auto& r : rects)
        w.line(std::to_string(r.frame_index) + " " + format_real(r.box.x) + " " +
               format_real(r.box.y) + " " + format_real(r.box.w) + " " + format_real(r.box.h));
    w.finish();
}

// -- dense labels ----------------------------------------------------------------------

DenseLabelFile load_dense_labels(const std::string& path) {
    auto lines = split_lines(read_file(path));
    Header h(path, lines, "denselabels", {"video", "frame_count"});
    DenseLabelFile file;
    file.video_id = h.str("video");
    file.frame_count = static_cast<int>(h.integer("frame_count"));
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (blank(lines[i])) continue;
        Tokenizer tok(path, i + 1, lines[i]);
        DenseLabel d;
        d.frame_index = static_cast<int>(tok.next_int("frame_index"));
        d.proposal_id = tok.next("proposal_id");
        d.box.x = tok.next_real("x");
        d.box.y = tok.next_real("y");
        d.box.w = tok.next_real("w");
        d.box.h = tok.next_real("h");
        d.score = tok.next_real("score");
        d.name = tok.next("name");
        tok.expect_end();
        file.labels.push_back(std::move(d));
    }
    return file;
}

void save_dense_labels(const std::string& path, const DenseLabelFile& file) {
    Writer w(path);
    w.line("#denselabels " + kv("video", file.video_id) + " " +
           kv("frame_count", std::to_string(file.frame_count)));
    for (const auto& d : file.labels)
        w.line(std::to_string(d.frame_index) + " " + d.proposal_id + " " + format_real(d.box.x) +
               " " + format_real(d.box.y) + " " + format_real(d.box.w) + " " +
               format_real(d.box.h) + " " + format_real(d.score) + " " + quote(d.name));
    w.finish();
}

// -- histograms --------------------------------------------------------------------------

std::vector<std::vector<double>> load_histograms(const std::string& path) {
    auto lines = split_lines(read_file(path));
    Header h(path, lines, "histograms", {"count", "dimension"});
    auto dim = h.integer("dimension");
    if (dim <= 0) throw parse_error(path, 1, "dimension must be positive");
    std::vector<std::vector<double>> out;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (blank(lines[i])) continue;
        Tokenizer tok(path, i + 1, lines[i]);
        std::vector<double> row;
        for (long long d = 0; d < dim; ++d) row.push_back(tok.next_real("bin"));
        tok.expect_end();
        out.push_back(std::move(row));
    }
    if (static_cast<long long>(out.size()) != h.integer("count"))
        throw integrity_error(path + ": histogram count does not match header");
    return out;
}

void save_histograms(const std::string& path, const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) throw integrity_error("histogram sequence is empty");
    Writer w(path);
    w.line("#histograms " + kv("count", std::to_string(rows.size())) + " " +
           kv("dimension", std::to_string(rows.front().size())));
    for (const auto& row : rows) {
        std::string line;
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) line.push_back(' ');
            line += format_real(row[i]);
        }
        w.line(line);
    }
    w.finish();
}

// -- groups ---------------------------------------------------------------------------

std::map<std::string, std::string> load_groups(const std::string& path) {
    auto lines = split_lines(read_file(path));
    Header h(path, lines, "groups", {"count"});
    std::map<std::string, std::string> out;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (blank(lines[i])) continue;
        Tokenizer tok(path, i + 1, lines[i]);
        std::string name = tok.next("name");
        std::string group = tok.next("group");
        tok.expect_end();
        if (!out.emplace(name, group).second)
            throw integrity_error(path + ": duplicate group mapping for '" + name + "'");
    }
    if (static_cast<long long>(out.size()) != h.integer("count"))
        throw integrity_error(path + ": group count does not match header");
    return out;
}

void save_groups(const std::string& path, const std::map<std::string, std::string>& groups) {
    Writer w(path);
    w.line("#groups " + kv("count", std::to_string(groups.size())));
    for (const auto& [name, group] : groups) w.line(quote(name) + " " + quote(group));
    w.finish();
}

} // namespace cast::io
