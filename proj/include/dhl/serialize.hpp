#pragma once

#include "index.hpp"

#include <array>
#include <cstring>
#include <istream>
#include <ostream>
#include <vector>

namespace dhl {

// CRC-32 (IEEE, reflected), table-driven
inline uint32_t crc32(const uint8_t *data, size_t len, uint32_t seed = 0)
{
    static const std::array<uint32_t, 256> table = [] {
        std::array<uint32_t, 256> t{};
        for (uint32_t i = 0; i < 256; i++) {
            uint32_t c = i;
            for (int k = 0; k < 8; k++)
                c = (c & 1) ? 0xedb88320u ^ (c >> 1) : c >> 1;
            t[i] = c;
        }
        return t;
    }();
    uint32_t crc = ~seed;
    for (size_t i = 0; i < len; i++)
        crc = table[(crc ^ data[i]) & 0xff] ^ (crc >> 8);
    return ~crc;
}

namespace detail {

// little-endian buffer writer
struct ByteWriter {
    std::vector<uint8_t> bytes;

    void raw(const void *p, size_t len)
    {
        const uint8_t *b = static_cast<const uint8_t*>(p);
        bytes.insert(bytes.end(), b, b + len);
    }
    template <typename T>
    void put(T v)
    {
        static_assert(std::is_integral_v<T>);
        for (size_t i = 0; i < sizeof(T); i++)
            bytes.push_back(static_cast<uint8_t>(static_cast<uint64_t>(v) >> (8 * i)));
    }
    void put_f64(double v)
    {
        uint64_t bits;
        std::memcpy(&bits, &v, 8);
        put<uint64_t>(bits);
    }
    void put_string(const std::string &s)
    {
        put<uint32_t>(static_cast<uint32_t>(s.size()));
        raw(s.data(), s.size());
    }
};

struct ByteReader {
    const uint8_t *p, *end;

    ByteReader(const uint8_t *data, size_t len) : p(data), end(data + len) {}

    void need(size_t n) const
    {
        if (static_cast<size_t>(end - p) < n)
            throw data_error("index section truncated");
    }
    template <typename T>
    T get()
    {
        static_assert(std::is_integral_v<T>);
        need(sizeof(T));
        uint64_t v = 0;
        for (size_t i = 0; i < sizeof(T); i++)
            v |= static_cast<uint64_t>(p[i]) << (8 * i);
        p += sizeof(T);
        return static_cast<T>(v);
    }
    double get_f64()
    {
        uint64_t bits = get<uint64_t>();
        double v;
        std::memcpy(&v, &bits, 8);
        return v;
    }
    std::string get_string()
    {
        uint32_t len = get<uint32_t>();
        need(len);
        std::string s(reinterpret_cast<const char*>(p), len);
        p += len;
        return s;
    }
    bool exhausted() const { return p == end; }
};

enum SectionID : uint16_t {
    SEC_GRAPH = 1,
    SEC_QUERY_HIERARCHY = 2,
    SEC_UPDATE_HIERARCHY = 3,
    SEC_LABELLING = 4,
    SEC_METADATA = 5,
};

inline void write_graph_section(ByteWriter &w, const Graph &g)
{
    const size_t n = g.node_count();
    w.put<uint64_t>(n);
    w.put<uint64_t>(g.edge_count());
    w.put<uint64_t>(g.arcs_read);
    w.put<uint32_t>(g.merge_conflicts);
    w.put<uint32_t>(g.self_loops_dropped);
    for (NodeID v = 0; v < n; v++)
        w.put<uint32_t>(g.external_id(v));
    w.put<uint8_t>(g.coordinates.empty() ? 0 : 1);
    if (!g.coordinates.empty()) {
        for (NodeID v = 0; v < n; v++) {
            w.put<int64_t>(g.coordinates[v].x);
            w.put<int64_t>(g.coordinates[v].y);
        }
        for (NodeID v = 0; v < n; v++)
            w.put<uint8_t>(g.coordinate_known[v]);
    }
    for (NodeID v = 0; v < n; v++) {
        w.put<uint32_t>(static_cast<uint32_t>(g.neighbors(v).size()));
        for (const Neighbor &nb : g.neighbors(v)) {
            w.put<uint32_t>(nb.node);
            w.put<uint64_t>(nb.distance);
        }
    }
}

inline Graph read_graph_section(ByteReader &r)
{
    uint64_t n = r.get<uint64_t>();
    Graph g(n);
    uint64_t edge_count = r.get<uint64_t>();
    g.arcs_read = r.get<uint64_t>();
    g.merge_conflicts = r.get<uint32_t>();
    g.self_loops_dropped = r.get<uint32_t>();
    for (NodeID v = 0; v < n; v++)
        g.external_ids()[v] = r.get<uint32_t>();
    if (r.get<uint8_t>()) {
        g.coordinates.resize(n);
        g.coordinate_known.resize(n);
        for (NodeID v = 0; v < n; v++) {
            g.coordinates[v].x = r.get<int64_t>();
            g.coordinates[v].y = r.get<int64_t>();
        }
        for (NodeID v = 0; v < n; v++)
            g.coordinate_known[v] = r.get<uint8_t>();
    }
    for (NodeID v = 0; v < n; v++) {
        uint32_t deg = r.get<uint32_t>();
        for (uint32_t j = 0; j < deg; j++) {
            NodeID u = r.get<uint32_t>();
            distance_t w = r.get<uint64_t>();
            if (u < v)
                g.add_edge(v, u, w);
        }
    }
    if (g.edge_count() != edge_count)
        throw data_error("graph section edge count mismatch");
    return g;
}

inline void write_hq_section(ByteWriter &w, const QueryHierarchy &hq)
{
    w.put<uint64_t>(hq.node_count());
    w.put<uint64_t>(hq.vertex_count());
    for (uint32_t id = 0; id < hq.node_count(); id++) {
        const TreeNode &n = hq.node(id);
        w.put<uint64_t>(n.bits);
        w.put<uint8_t>(n.depth);
        w.put<uint32_t>(n.parent);
        w.put<uint32_t>(static_cast<uint32_t>(n.members.size()));
        for (NodeID v : n.members)
            w.put<uint32_t>(v);
    }
}

inline QueryHierarchy read_hq_section(ByteReader &r)
{
    uint64_t node_count = r.get<uint64_t>();
    uint64_t vertex_count = r.get<uint64_t>();
    std::vector<TreeNode> nodes(node_count);
    for (TreeNode &n : nodes) {
        n.bits = r.get<uint64_t>();
        n.depth = r.get<uint8_t>();
        n.parent = r.get<uint32_t>();
        uint32_t members = r.get<uint32_t>();
        n.members.resize(members);
        for (NodeID &v : n.members)
            v = r.get<uint32_t>();
    }
    return QueryHierarchy::from_parts(vertex_count, std::move(nodes));
}

inline void write_hu_section(ByteWriter &w, const UpdateHierarchy &hu)
{
    w.put<uint64_t>(hu.vertex_count());
    for (NodeID v = 0; v < hu.vertex_count(); v++) {
        const auto &ups = hu.upward(v);
        const auto &ws = hu.upward_weights(v);
        w.put<uint32_t>(static_cast<uint32_t>(ups.size()));
        for (size_t j = 0; j < ups.size(); j++) {
            w.put<uint32_t>(ups[j]);
            w.put<uint64_t>(ws[j]);
        }
    }
}

inline UpdateHierarchy read_hu_section(ByteReader &r, const QueryHierarchy &hq)
{
    uint64_t n = r.get<uint64_t>();
    if (n != hq.vertex_count())
        throw data_error("update hierarchy vertex count mismatch");
    std::vector<uint32_t> ranks(n);
    for (NodeID v = 0; v < n; v++)
        ranks[v] = hq.rank(v);
    std::vector<std::vector<NodeID>> up(n);
    std::vector<std::vector<distance_t>> up_w(n);
    for (NodeID v = 0; v < n; v++) {
        uint32_t count = r.get<uint32_t>();
        up[v].resize(count);
        up_w[v].resize(count);
        for (uint32_t j = 0; j < count; j++) {
            up[v][j] = r.get<uint32_t>();
            up_w[v][j] = r.get<uint64_t>();
        }
    }
    return UpdateHierarchy::from_parts(std::move(ranks), std::move(up), std::move(up_w));
}

inline void write_label_section(ByteWriter &w, const Labelling &l)
{
    w.put<uint64_t>(l.vertex_count());
    for (uint64_t off : l.raw_offsets())
        w.put<uint64_t>(off);
    w.put<uint64_t>(l.entry_count());
    for (distance_t d : l.raw_entries())
        w.put<uint64_t>(d);
}

inline Labelling read_label_section(ByteReader &r)
{
    uint64_t n = r.get<uint64_t>();
    std::vector<uint64_t> offsets(n + 1);
    for (uint64_t &off : offsets)
        off = r.get<uint64_t>();
    uint64_t entries = r.get<uint64_t>();
    std::vector<distance_t> entry(entries);
    for (distance_t &d : entry)
        d = r.get<uint64_t>();
    return Labelling::from_parts(std::move(offsets), std::move(entry));
}

inline void write_meta_section(ByteWriter &w, const BuildMeta &m)
{
    w.put<uint16_t>(m.format_version);
    w.put_f64(m.beta);
    w.put<uint32_t>(m.leaf_size);
    w.put<uint64_t>(m.seed);
    w.put<uint64_t>(m.built_at_unix);
    w.put_string(m.dataset);
}

inline BuildMeta read_meta_section(ByteReader &r)
{
    BuildMeta m;
    m.format_version = r.get<uint16_t>();
    m.beta = r.get_f64();
    m.leaf_size = r.get<uint32_t>();
    m.seed = r.get<uint64_t>();
    m.built_at_unix = r.get<uint64_t>();
    m.dataset = r.get_string();
    return m;
}

} // namespace detail

constexpr uint16_t index_format_version = 1;
constexpr char index_magic[4] = {'D', 'H', 'L', '1'};

// layout: magic, version, section count, section table, then per section
// the payload followed by its CRC-32
inline std::vector<uint8_t> serialize_index(const HierarchicalIndex &index)
{
    using namespace detail;
    std::array<std::pair<uint16_t, ByteWriter>, 5> sections{{
        {SEC_GRAPH, {}}, {SEC_QUERY_HIERARCHY, {}}, {SEC_UPDATE_HIERARCHY, {}},
        {SEC_LABELLING, {}}, {SEC_METADATA, {}},
    }};
    write_graph_section(sections[0].second, index.graph);
    write_hq_section(sections[1].second, index.hq);
    write_hu_section(sections[2].second, index.hu);
    write_label_section(sections[3].second, index.labels);
    write_meta_section(sections[4].second, index.meta);

    ByteWriter out;
    out.raw(index_magic, 4);
    out.put<uint16_t>(index_format_version);
    out.put<uint16_t>(static_cast<uint16_t>(sections.size()));
    uint64_t offset = 4 + 2 + 2 + sections.size() * 20;
    for (const auto &[id, sec] : sections) {
        out.put<uint16_t>(id);
        out.put<uint16_t>(0);
        out.put<uint64_t>(offset);
        out.put<uint64_t>(sec.bytes.size());
        offset += sec.bytes.size() + 4;
    }
    for (const auto &[id, sec] : sections) {
        out.raw(sec.bytes.data(), sec.bytes.size());
        out.put<uint32_t>(crc32(sec.bytes.data(), sec.bytes.size()));
    }
    return out.bytes;
}

inline HierarchicalIndex deserialize_index(const std::vector<uint8_t> &bytes)
{
    using namespace detail;
    ByteReader header(bytes.data(), bytes.size());
    header.need(8);
    if (std::memcmp(header.p, index_magic, 4) != 0)
        throw data_error("not an index file (bad magic)");
    header.p += 4;
    uint16_t version = header.get<uint16_t>();
    if (version != index_format_version)
        throw data_error("unsupported index format version " + std::to_string(version));
    uint16_t count = header.get<uint16_t>();
    struct Entry { uint16_t id; uint64_t offset, length; };
    std::vector<Entry> table(count);
    for (Entry &e : table) {
        e.id = header.get<uint16_t>();
        header.get<uint16_t>();
        e.offset = header.get<uint64_t>();
        e.length = header.get<uint64_t>();
    }
    auto section = [&](uint16_t id) {
        for (const Entry &e : table)
            if (e.id == id) {
                if (e.offset > bytes.size() || e.length > bytes.size() - e.offset ||
                    bytes.size() - e.offset - e.length < 4)
                    throw data_error("index section out of bounds");
                const uint8_t *payload = bytes.data() + e.offset;
                ByteReader crc_r(payload + e.length, 4);
                if (crc_r.get<uint32_t>() != crc32(payload, e.length))
                    throw data_error("CRC mismatch in section " + std::to_string(id));
                return ByteReader(payload, e.length);
            }
        throw data_error("missing index section " + std::to_string(id));
    };

    HierarchicalIndex index;
    ByteReader r = section(SEC_GRAPH);
    index.graph = read_graph_section(r);
    r = section(SEC_QUERY_HIERARCHY);
    index.hq = read_hq_section(r);
    r = section(SEC_UPDATE_HIERARCHY);
    index.hu = read_hu_section(r, index.hq);
    r = section(SEC_LABELLING);
    index.labels = read_label_section(r);
    r = section(SEC_METADATA);
    index.meta = read_meta_section(r);
    if (index.hq.vertex_count() != index.graph.node_count() ||
        index.labels.vertex_count() != index.graph.node_count())
        throw data_error("index sections disagree on vertex count");
    return index;
}

inline void write_index(std::ostream &out, const HierarchicalIndex &index)
{
    std::vector<uint8_t> bytes = serialize_index(index);
    out.write(reinterpret_cast<const char*>(bytes.data()), bytes.size());
    if (!out)
        throw data_error("failed to write index file");
}

inline HierarchicalIndex read_index(std::istream &in)
{
    std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                               std::istreambuf_iterator<char>());
    return deserialize_index(bytes);
}

} // namespace dhl
