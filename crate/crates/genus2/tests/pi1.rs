use genus2::corpus;
use genus2::dsl::parse_word;
use genus2::pi1::{Pi1Model, Pi1Error, SurfaceGroupElement, Verdict};
use genus2::registry::Registry;
use genus2::word::Word;

fn relations() -> Vec<(String, String)> {
    let mut out = Vec::new();
    for i in 1..=5 {
        for j in i + 2..=5 {
            out.push((format!("c{i} c{j}"), format!("c{j} c{i}")));
        }
        if i < 5 {
            let j = i + 1;
            out.push((format!("c{i} c{j} c{i}"), format!("c{j} c{i} c{j}")));
        }
        let tau = "c1 c2 c3 c4 c5 c5 c4 c3 c2 c1";
        out.push((format!("{tau} c{i}"), format!("c{i} {tau}")));
    }
    out.push(("(c1 c2 c3 c4 c5)^6".into(), "()".into()));
    out.push(("(c1 c2 c3 c4 c5^2 c4 c3 c2 c1)^2".into(), "()".into()));
    out.push(("d".into(), "(c1 c2)^6".into()));
    out
}

#[test]
fn presentation_relations_act_alike() {
    let reg = Registry::standard();
    let m = Pi1Model::new(&reg);
    for (u, v) in relations() {
        let (u, v) = (parse_word(&u).unwrap(), parse_word(&v).unwrap());
        assert!(matches!(m.equal_up_to_inner(&u, &v, 12).unwrap(), Verdict::Equal(_)), "{u} = {v}");
    }
}

#[test]
fn chain_fixture_relator_acts_by_conjugation() {
    let reg = Registry::standard();
    let m = Pi1Model::new(&reg);
    let z0 = corpus::relator(&reg, "Z(0)").unwrap();
    for g in 1..=4 {
        let x = SurfaceGroupElement::generator(g);
        let y = m.apply_word(&z0.word, &x).unwrap();
        assert!(m.action(&z0.word).unwrap().find_inner(12).is_some());
        assert_eq!(y.abelianize(), x.abelianize());
    }
    let x0 = corpus::relator(&reg, "X(0)").unwrap();
    assert!(matches!(m.action(&x0.word), Err(Pi1Error::MissingAutomorphism(_))));
}

#[test]
fn tau_inverts_homology() {
    let reg = Registry::standard();
    let m = Pi1Model::new(&reg);
    for g in 1..=4 {
        let x = SurfaceGroupElement::generator(g);
        let y = m.apply_word(&reg.tau_word(), &x).unwrap();
        assert_eq!(y.abelianize(), x.inverse().abelianize());
    }
    assert_eq!(m.apply_word(&Word::empty(), &SurfaceGroupElement::new(vec![1, -1, 2])), Ok(SurfaceGroupElement::generator(2)));
}
