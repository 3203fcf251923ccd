//! The display property in executable form: isolating a substructure and
//! plugging a replacement agrees with substitution along the occurrence
//! path, and display equivalence is symmetric.

use lei_core::display::{closure, isolate};
use lei_core::generate::Generator;
use lei_core::presets;

#[test]
fn plug_after_isolate_is_path_substitution() {
    for name in presets::NAMES {
        let rules = presets::ruleset(name).unwrap();
        let mut g = Generator::new(&rules, 11);
        for _ in 0..200 {
            let seq = g.sequent(3);
            let occ = g.occurrence(&seq);
            let sort = seq.sort_at(rules.sig(), &occ).unwrap();
            let replacement = g.structure(sort, 2);
            let displayed = isolate(&seq, &occ, &rules).unwrap_or_else(|e| panic!("{name}: {seq} at {occ}: {e}"));
            assert_eq!(displayed.isolated(), seq.resolve(&occ).unwrap(), "{name}: {seq} at {occ}");
            let plugged = displayed.plug(replacement.clone(), &rules).unwrap();
            assert_eq!(plugged, seq.replace(&occ, replacement), "{name}: {seq} at {occ}");
        }
    }
}

#[test]
fn display_equivalence_is_symmetric() {
    for name in presets::NAMES {
        let rules = presets::ruleset(name).unwrap();
        let mut g = Generator::new(&rules, 12);
        for _ in 0..40 {
            let seq = g.sequent(2);
            let class = closure(&seq, &rules);
            let i = rand::Rng::gen_range(g.rng(), 0..class.len());
            let other = &class.members[i];
            assert!(closure(other, &rules).contains(&seq), "{name}: {seq} vs {other}");
        }
    }
}
