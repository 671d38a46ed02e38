use qeclab::builders::{build, BuildSpec};
use qeclab::pauli::Phase;
use qeclab::protocol::*;

#[test]
fn dbg() {
    let layout = build(&BuildSpec::SingleQubitDesign { d: 3 }).unwrap();
    for (l, op) in &layout.logicals {
        println!("{l}: weight {} {}", op.weight(), op);
    }
    let frame = CodeFrame::new(&layout).unwrap();
    let z1 = layout.logical("Z1").unwrap().clone();
    let ya = {
        let mut y = layout.logical("Xa").unwrap().mul(layout.logical("Za").unwrap()).unwrap();
        y.set_phase(y.phase().mul(Phase::PLUS_I));
        y
    };
    let joint = z1.mul(&ya).unwrap();
    println!("joint weight {}", joint.weight());
    // overlap?
    let overlap: Vec<usize> = z1.support().into_iter().filter(|q| ya.letter(*q) != qeclab::pauli::PauliKind::I).collect();
    println!("overlap Z1∩Ya: {overlap:?}");

    let mut sim = frame.code_state(3).unwrap();
    frame.set_logical(&mut sim, "Z1", 1).unwrap();
    println!("Z1 before: {:?}", sim.deterministic_value(&z1));
    let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(9);
    // init ancilla
    frame.set_logical(&mut sim, "Xa", 1).unwrap();
    println!("Z1 after init: {:?}", sim.deterministic_value(&z1));
    let out = measure_string(&mut sim, &frame, &joint, 1, Some(1), ReadoutNoise::default(), &mut rng).unwrap();
    println!("joint outcome {}, Z1 after joint: {:?}", out.value, sim.deterministic_value(&z1));
    let za = layout.logical("Za").unwrap().clone();
    let out2 = measure_string(&mut sim, &frame, &za, 1, Some(1), ReadoutNoise::default(), &mut rng).unwrap();
    println!("za outcome {}, Z1 after za: {:?}", out2.value, sim.deterministic_value(&z1));
}
