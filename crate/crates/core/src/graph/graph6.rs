use super::{GraphError, SimpleGraph};

const MAX_VERTICES: usize = 258_047;

fn push_size(out: &mut Vec<u8>, n: usize) {
    if n <= 62 {
        out.push(n as u8 + 63);
    } else {
        out.push(126);
        for shift in [12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    }
}

/// Standard graph6 encoding without the optional `>>graph6<<` header.
pub fn encode_graph6(g: &SimpleGraph) -> Result<String, GraphError> {
    let n = g.vertex_count();
    if n > MAX_VERTICES {
        return Err(GraphError::SizeCap {
            what: "graph6 input",
            size: n,
            cap: MAX_VERTICES,
        });
    }
    let mut out = Vec::new();
    push_size(&mut out, n);
    let bits = n * n.saturating_sub(1) / 2;
    let mut packed = vec![0u8; bits.div_ceil(6)];
    // bit k covers the pair (i, j), i < j, in column order: k = j(j-1)/2 + i
    for (i, j) in g.edges() {
        let k = j * (j - 1) / 2 + i;
        packed[k / 6] |= 1 << (5 - k % 6);
    }
    out.extend(packed.iter().map(|b| b + 63));
    Ok(String::from_utf8(out).expect("graph6 bytes are ASCII"))
}

pub fn decode_graph6(text: &str) -> Result<SimpleGraph, GraphError> {
    let text = text.trim();
    let text = text.strip_prefix(">>graph6<<").unwrap_or(text);
    let bytes = text.as_bytes();
    let bad = |s: &str| GraphError::Graph6(s.to_string());
    if bytes.iter().any(|&b| !(63..=126).contains(&b)) {
        return Err(bad("character outside the graph6 range"));
    }
    let (n, body) = match bytes.first() {
        None => return Err(bad("empty input")),
        Some(&126) => {
            if bytes.get(1) == Some(&126) {
                return Err(bad("graphs above 258047 vertices are not supported"));
            }
            if bytes.len() < 4 {
                return Err(bad("truncated size field"));
            }
            let n = bytes[1..4]
                .iter()
                .fold(0usize, |acc, &b| (acc << 6) | (b - 63) as usize);
            (n, &bytes[4..])
        }
        Some(&b) => ((b - 63) as usize, &bytes[1..]),
    };
    let bits = n * n.saturating_sub(1) / 2;
    if body.len() != bits.div_ceil(6) {
        return Err(bad(&format!(
            "expected {} data bytes for {n} vertices, found {}",
            bits.div_ceil(6),
            body.len()
        )));
    }
    let mut edges = Vec::new();
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            let byte = body[k / 6] - 63;
            if byte >> (5 - k % 6) & 1 == 1 {
                edges.push((i, j));
            }
            k += 1;
        }
    }
    if bits % 6 != 0 {
        let last = body[body.len() - 1] - 63;
        if last & ((1 << (6 - bits % 6)) - 1) != 0 {
            return Err(bad("nonzero padding bits"));
        }
    }
    SimpleGraph::from_edges(n, &edges)
}
