//! Structural validator for static GEXF 1.2 documents, following the
//! element, attribute and enumeration rules of the 1.2draft XSD.

use std::collections::{BTreeMap, BTreeSet};

use roxmltree::{Document, Node};

pub const NAMESPACE: &str = "http://www.gexf.net/1.2draft";

const ATTR_TYPES: [&str; 8] = ["integer", "long", "double", "float", "boolean", "liststring", "string", "anyURI"];
const EDGE_TYPES: [&str; 3] = ["directed", "undirected", "mutual"];

fn gexf_children<'a, 'i>(n: Node<'a, 'i>) -> impl Iterator<Item = Node<'a, 'i>> {
    n.children()
        .filter(|c| c.is_element() && c.tag_name().namespace() == Some(NAMESPACE))
}

fn allowed_attrs(n: Node, allowed: &[&str]) -> Result<(), String> {
    for a in n.attributes() {
        if a.namespace().is_none() && !allowed.contains(&a.name()) {
            return Err(format!("<{}> has unexpected attribute {}", n.tag_name().name(), a.name()));
        }
    }
    Ok(())
}

fn required<'a>(n: Node<'a, '_>, attr: &str) -> Result<&'a str, String> {
    n.attribute(attr)
        .ok_or_else(|| format!("<{}> is missing required attribute {attr}", n.tag_name().name()))
}

fn one_of(n: Node, attr: &str, values: &[&str]) -> Result<(), String> {
    match n.attribute(attr) {
        Some(v) if !values.contains(&v) => Err(format!("<{}> {attr}={v:?} is not one of {values:?}", n.tag_name().name())),
        _ => Ok(()),
    }
}

fn check_value(ty: &str, v: &str) -> bool {
    match ty {
        "integer" => v.parse::<i32>().is_ok(),
        "long" => v.parse::<i64>().is_ok(),
        "double" | "float" => v.parse::<f64>().is_ok(),
        "boolean" => matches!(v, "true" | "false" | "1" | "0"),
        _ => true,
    }
}

/// Ok when `xml` is a well-formed static GEXF 1.2 graph whose attribute
/// values match their declared types and whose edges reference declared
/// nodes.
pub fn validate(xml: &str) -> Result<(), String> {
    let doc = Document::parse(xml).map_err(|e| format!("not well-formed: {e}"))?;
    let root = doc.root_element();
    if root.tag_name().name() != "gexf" || root.tag_name().namespace() != Some(NAMESPACE) {
        return Err(format!("root element must be gexf in {NAMESPACE}"));
    }
    if root.attribute("version") != Some("1.2") {
        return Err("gexf version must be 1.2".into());
    }
    allowed_attrs(root, &["version", "variant"])?;

    let top: Vec<Node> = gexf_children(root).collect();
    let names: Vec<&str> = top.iter().map(|n| n.tag_name().name()).collect();
    match names.as_slice() {
        ["graph"] | ["meta", "graph"] => {}
        other => return Err(format!("gexf children must be [meta] graph, found {other:?}")),
    }
    if let Some(meta) = top.iter().find(|n| n.has_tag_name((NAMESPACE, "meta"))) {
        allowed_attrs(*meta, &["lastmodifieddate"])?;
        for c in gexf_children(*meta) {
            if !["creator", "keywords", "description"].contains(&c.tag_name().name()) {
                return Err(format!("unexpected <{}> in meta", c.tag_name().name()));
            }
        }
    }

    let graph = *top.last().unwrap();
    allowed_attrs(graph, &["mode", "defaultedgetype", "idtype", "timeformat", "start", "end"])?;
    one_of(graph, "mode", &["static", "dynamic"])?;
    one_of(graph, "defaultedgetype", &EDGE_TYPES)?;
    one_of(graph, "idtype", &["integer", "string"])?;

    let mut node_attrs: BTreeMap<String, String> = BTreeMap::new();
    let mut stage = 0;
    let mut node_ids = BTreeSet::new();
    let mut edges = Vec::new();
    for c in gexf_children(graph) {
        match c.tag_name().name() {
            "attributes" => {
                if stage > 0 {
                    return Err("<attributes> must precede nodes and edges".into());
                }
                allowed_attrs(c, &["class", "mode", "start", "end"])?;
                let class = required(c, "class")?;
                one_of(c, "class", &["node", "edge"])?;
                for a in gexf_children(c) {
                    if a.tag_name().name() != "attribute" {
                        return Err(format!("unexpected <{}> in attributes", a.tag_name().name()));
                    }
                    allowed_attrs(a, &["id", "title", "type"])?;
                    let id = required(a, "id")?;
                    required(a, "title")?;
                    let ty = required(a, "type")?;
                    one_of(a, "type", &ATTR_TYPES)?;
                    if class == "node" && node_attrs.insert(id.to_owned(), ty.to_owned()).is_some() {
                        return Err(format!("duplicate node attribute id {id}"));
                    }
                }
            }
            "nodes" => {
                if stage > 0 {
                    return Err("<nodes> must appear once, before edges".into());
                }
                stage = 1;
                allowed_attrs(c, &["count"])?;
                for n in gexf_children(c) {
                    if n.tag_name().name() != "node" {
                        return Err(format!("unexpected <{}> in nodes", n.tag_name().name()));
                    }
                    allowed_attrs(n, &["id", "label", "pid", "start", "end"])?;
                    let id = required(n, "id")?;
                    if !node_ids.insert(id.to_owned()) {
                        return Err(format!("duplicate node id {id}"));
                    }
                    for part in gexf_children(n) {
                        match part.tag_name().name() {
                            "attvalues" => {
                                for v in gexf_children(part) {
                                    if v.tag_name().name() != "attvalue" {
                                        return Err("attvalues may only hold attvalue".into());
                                    }
                                    let key = required(v, "for")?;
                                    let value = required(v, "value")?;
                                    let ty = node_attrs
                                        .get(key)
                                        .ok_or_else(|| format!("attvalue for undeclared attribute {key}"))?;
                                    if !check_value(ty, value) {
                                        return Err(format!("value {value:?} is not a valid {ty}"));
                                    }
                                }
                            }
                            "spells" | "parents" => {}
                            other => return Err(format!("unexpected <{other}> in node")),
                        }
                    }
                }
            }
            "edges" => {
                if stage > 1 {
                    return Err("<edges> must appear once".into());
                }
                stage = 2;
                allowed_attrs(c, &["count"])?;
                let mut edge_ids = BTreeSet::new();
                for e in gexf_children(c) {
                    if e.tag_name().name() != "edge" {
                        return Err(format!("unexpected <{}> in edges", e.tag_name().name()));
                    }
                    allowed_attrs(e, &["id", "source", "target", "weight", "type", "label", "start", "end"])?;
                    let id = required(e, "id")?;
                    if !edge_ids.insert(id.to_owned()) {
                        return Err(format!("duplicate edge id {id}"));
                    }
                    one_of(e, "type", &EDGE_TYPES)?;
                    if let Some(w) = e.attribute("weight") {
                        if w.parse::<f64>().is_err() {
                            return Err(format!("edge weight {w:?} is not a float"));
                        }
                    }
                    edges.push((required(e, "source")?.to_owned(), required(e, "target")?.to_owned()));
                }
            }
            other => return Err(format!("unexpected <{other}> in graph")),
        }
    }
    for (s, t) in edges {
        if !node_ids.contains(&s) || !node_ids.contains(&t) {
            return Err(format!("edge {s}-{t} references an undeclared node"));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const GOOD: &str = r#"<?xml version="1.0" encoding="UTF-8"?>
<gexf xmlns="http://www.gexf.net/1.2draft" version="1.2">
  <graph mode="static" defaultedgetype="undirected">
    <attributes class="node"><attribute id="0" title="rank" type="double"/></attributes>
    <nodes>
      <node id="a" label="A"><attvalues><attvalue for="0" value="0.5"/></attvalues></node>
      <node id="b" label="B"/>
    </nodes>
    <edges><edge id="0" source="a" target="b" weight="1.5"/></edges>
  </graph>
</gexf>"#;

    #[test]
    fn accepts_minimal_document() {
        assert_eq!(validate(GOOD), Ok(()));
    }

    #[test]
    fn rejects_violations() {
        for (from, to) in [
            ("version=\"1.2\"", "version=\"1.1\""),
            ("1.2draft", "1.1draft"),
            ("target=\"b\"", "target=\"c\""),
            ("value=\"0.5\"", "value=\"high\""),
            ("for=\"0\"", "for=\"9\""),
            ("defaultedgetype=\"undirected\"", "defaultedgetype=\"sideways\""),
            ("weight=\"1.5\"", "weight=\"heavy\""),
            ("node id=\"b\"", "node id=\"a\""),
            ("type=\"double\"", "type=\"real\""),
            ("<edges>", "<edgez>"),
        ] {
            let bad = GOOD.replace(from, to).replace("</edges>", if to == "<edgez>" { "</edgez>" } else { "</edges>" });
            assert!(validate(&bad).is_err(), "accepted after replacing {from}");
        }
        assert!(validate("<gexf").is_err());
    }
}
