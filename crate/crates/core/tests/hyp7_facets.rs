use std::collections::BTreeMap;

use hypercone_core::equiv::face_certificate;
use hypercone_core::facelat::incidence;

#[test]
fn facet_faces() {
    let inc = incidence(6).unwrap();
    let full = inc.full_face();
    assert_eq!(full.rank, 21);
    let subs = inc.subfaces(&full);
    assert_eq!(subs.len(), 3773);
    let mut classes = BTreeMap::new();
    for f in &subs {
        let d = inc.examine(f).unwrap();
        assert_eq!(d.ann.len(), 8);
        let c = face_certificate(inc, f, &d).unwrap();
        *classes.entry(c).or_insert(0) += 1;
    }
    assert_eq!(classes.len(), 9);
}
