fn main() { println!("qeclab"); }
