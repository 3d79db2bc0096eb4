// Binary index snapshot. Layout (all integers little-endian):
//
//   "CBIX" u32 version
//   analyzer: u8 mode, u8 subtoken, u8 lower, strings tokenizer-stoplist,
//             u8 expand, strings stoplist
//   u32 n_docs, f64 avgdl
//   n_docs x { str id, u32 dl, str tokenizer_id, strings payload }
//   u64 n_terms, n_terms x { str term, u32 n, n x { u32 doc, u32 tf } }
//
// where str = u32 length + bytes and strings = u32 count + count x str.

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "commentbench/error.hpp"
#include "commentbench/retrieval.hpp"

namespace commentbench {

namespace {

constexpr char kMagic[4] = {'C', 'B', 'I', 'X'};
constexpr std::uint32_t kVersion = 1;

class Writer {
  public:
    void u8(std::uint8_t v) { out_.push_back(static_cast<char>(v)); }
    void u32(std::uint32_t v) {
        for (int i = 0; i < 4; ++i) u8(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    void u64(std::uint64_t v) {
        for (int i = 0; i < 8; ++i) u8(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
    void str(std::string_view s) {
        u32(static_cast<std::uint32_t>(s.size()));
        out_.append(s);
    }
    template <typename Range>
    void strings(const Range& r) {
        u32(static_cast<std::uint32_t>(std::size(r)));
        for (const auto& s : r) str(s);
    }
    void raw(std::string_view s) { out_.append(s); }
    std::string take() { return std::move(out_); }

  private:
    std::string out_;
};

class Reader {
  public:
    explicit Reader(std::string_view in) : in_(in) {}

    std::uint8_t u8() {
        need(1);
        return static_cast<std::uint8_t>(in_[pos_++]);
    }
    std::uint32_t u32() {
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(u8()) << (8 * i);
        return v;
    }
    std::uint64_t u64() {
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(u8()) << (8 * i);
        return v;
    }
    double f64() { return std::bit_cast<double>(u64()); }
    std::string str() {
        const std::uint32_t n = u32();
        need(n);
        std::string s(in_.substr(pos_, n));
        pos_ += n;
        return s;
    }
    std::vector<std::string> strings() {
        const std::uint32_t n = u32();
        std::vector<std::string> out;
        out.reserve(std::min<std::uint32_t>(n, 1u << 16));
        for (std::uint32_t i = 0; i < n; ++i) out.push_back(str());
        return out;
    }
    std::string_view raw(std::size_t n) {
        need(n);
        auto s = in_.substr(pos_, n);
        pos_ += n;
        return s;
    }
    bool done() const { return pos_ == in_.size(); }

  private:
    void need(std::size_t n) const {
        if (in_.size() - pos_ < n) throw DataError("truncated index snapshot");
    }

    std::string_view in_;
    std::size_t pos_ = 0;
};

void write_analyzer(Writer& w, const AnalyzerConfig& a) {
    w.u8(static_cast<std::uint8_t>(a.tokenizer.mode));
    w.u8(a.tokenizer.subtoken_split);
    w.u8(a.tokenizer.lowercase);
    w.strings(a.tokenizer.stoplist);
    w.u8(a.expand_subtokens);
    w.strings(a.stoplist);
}

AnalyzerConfig read_analyzer(Reader& r) {
    AnalyzerConfig a;
    const auto mode = r.u8();
    if (mode > static_cast<std::uint8_t>(TokenizerMode::passthrough)) throw DataError("bad tokenizer mode in snapshot");
    a.tokenizer.mode = static_cast<TokenizerMode>(mode);
    a.tokenizer.subtoken_split = r.u8() != 0;
    a.tokenizer.lowercase = r.u8() != 0;
    for (auto& s : r.strings()) a.tokenizer.stoplist.insert(std::move(s));
    a.expand_subtokens = r.u8() != 0;
    for (auto& s : r.strings()) a.stoplist.insert(std::move(s));
    return a;
}

} // namespace

std::string Index::serialize() const {
    Writer w;
    w.raw(std::string_view(kMagic, 4));
    w.u32(kVersion);
    write_analyzer(w, analyzer_);
    w.u32(static_cast<std::uint32_t>(doc_lengths_.size()));
    w.f64(avgdl_);
    for (std::size_t d = 0; d < doc_lengths_.size(); ++d) {
        w.str(doc_ids_[d]);
        w.u32(doc_lengths_[d]);
        w.str(payloads_[d].tokenizer_id);
        w.strings(payloads_[d].tokens);
    }
    w.u64(postings_.size());
    for (const auto& [term, list] : postings_) {
        w.str(term);
        w.u32(static_cast<std::uint32_t>(list.size()));
        for (const auto& p : list) {
            w.u32(p.doc);
            w.u32(p.tf);
        }
    }
    return w.take();
}

Index Index::deserialize(std::string_view bytes) {
    Reader r(bytes);
    if (r.raw(4) != std::string_view(kMagic, 4)) throw DataError("not an index snapshot (bad magic)");
    if (const auto v = r.u32(); v != kVersion) {
        throw DataError("unsupported snapshot version " + std::to_string(v));
    }
    Index index;
    index.analyzer_ = read_analyzer(r);
    const std::uint32_t n = r.u32();
    index.avgdl_ = r.f64();
    for (std::uint32_t d = 0; d < n; ++d) {
        index.doc_ids_.push_back(r.str());
        index.doc_lengths_.push_back(r.u32());
        std::string tokenizer_id = r.str();
        index.payloads_.emplace_back(r.strings(), std::move(tokenizer_id));
    }
    const std::uint64_t terms = r.u64();
    for (std::uint64_t t = 0; t < terms; ++t) {
        std::string term = r.str();
        const std::uint32_t count = r.u32();
        std::vector<Posting> list;
        list.reserve(count);
        for (std::uint32_t i = 0; i < count; ++i) {
            Posting p;
            p.doc = r.u32();
            p.tf = r.u32();
            if (p.doc >= n) throw DataError("snapshot posting references doc " + std::to_string(p.doc));
            list.push_back(p);
        }
        index.postings_.emplace(std::move(term), std::move(list));
    }
    if (!r.done()) throw DataError("trailing bytes after index snapshot");
    return index;
}

void Index::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    const auto bytes = serialize();
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw DataError("write failed for " + path.string());
}

Index Index::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return deserialize(buf.str());
}

} // namespace commentbench
