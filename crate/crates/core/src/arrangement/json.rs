use serde::{Deserialize, Serialize};

use super::geometry::{Curve, Point};
use super::graph::{build_arrangement_graph, ArrangementGraph};
use super::ArrangementError;

/// Input geometry: marked points and curves, all coordinates exact.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeometryDocument {
    pub curves: Vec<Curve>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default)]
    pub points: Vec<Point>,
}

impl GeometryDocument {
    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("geometry serializes")
    }

    /// Builds the arrangement with `k` from the document, else `default_k`.
    pub fn arrangement(&self, default_k: usize) -> Result<ArrangementGraph, ArrangementError> {
        build_arrangement_graph(&self.points, &self.curves, self.k.unwrap_or(default_k))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let text = r#"{"curves":[{"a":"1/2","b":"0"},{"polyline":[["0","1"],["2","-1/3"]]}],"points":[["0","0"]]}"#;
        let doc = GeometryDocument::from_json(text).unwrap();
        assert_eq!(doc.curves.len(), 2);
        assert!(matches!(doc.curves[0], Curve::Line { .. }));
        let again = GeometryDocument::from_json(&doc.to_json()).unwrap();
        assert_eq!(doc, again);
        assert!(doc.to_json().contains("\"1/2\""));
    }
}
