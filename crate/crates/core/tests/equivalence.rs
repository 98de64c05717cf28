use hypercone_core::bits::Bits;
use hypercone_core::equiv::{face_certificate, oracle_equivalent, Certificate};
use hypercone_core::facelat::{incidence, FaceData};
use hypercone_core::hypercone::{facet_catalog, BVector};

/// Examined facet face of the k-th orbit representative (0-based).
fn facet_face(k: usize) -> (FaceData, Certificate) {
    let inc = incidence(6).unwrap();
    let rep = &facet_catalog(6).unwrap().orbit_reps()[k];
    let id = inc.facet_id(rep).unwrap();
    let face = inc.face_of_facets(&Bits::from_indices(inc.facets().len(), [id]));
    assert_eq!(face.rank, 20);
    let data = inc.examine(&face).unwrap();
    let cert = face_certificate(inc, &face, &data).unwrap();
    (data, cert)
}

#[test]
fn facet_annulator_is_basis_plus_inequality() {
    let (data, _) = facet_face(0);
    let rep = &facet_catalog(6).unwrap().orbit_reps()[0];
    let mut expected: Vec<BVector> = (0..7)
        .map(|i| BVector::new((0..7).map(|j| i64::from(i == j)).collect()).unwrap())
        .chain([rep.clone()])
        .collect();
    expected.sort();
    let mut ann = data.ann.clone();
    ann.sort();
    assert_eq!(ann, expected);
}

#[test]
fn partner_facets_are_equivalent() {
    // b3 and b4 form one geometric class, b1 and b2 are different classes
    let (f1, c1) = facet_face(0);
    let (f2, c2) = facet_face(1);
    let (f3, c3) = facet_face(2);
    let (f4, c4) = facet_face(3);
    assert_eq!(c3, c4);
    assert_ne!(c1, c2);
    assert!(oracle_equivalent(&f3.ann, &f4.ann).unwrap());
    assert!(!oracle_equivalent(&f1.ann, &f2.ann).unwrap());
    assert!(oracle_equivalent(&f1.ann, &f1.ann).unwrap());
}

#[test]
fn certificate_bytes_round_trip() {
    let (_, c) = facet_face(4);
    assert_eq!(Certificate::from_bytes(&c.to_bytes()).unwrap(), c);
}
