use std::ffi::{CStr, CString};
use std::ptr;

use prar_ffi::*;

fn cstr(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    let p = prar_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn generate(spec: &str) -> *mut PrarGraph {
    let mut g = ptr::null_mut();
    let s = cstr(spec);
    assert_eq!(unsafe { prar_graph_generate(s.as_ptr(), &mut g) }, PrarStatus::Ok);
    g
}

fn sampler(g: *const PrarGraph, model: &str, seed: u64) -> *mut PrarSampler {
    let mut s = ptr::null_mut();
    let m = cstr(model);
    let status = unsafe { prar_sampler_new(g, m.as_ptr(), ptr::null(), seed, 0, &mut s) };
    assert_eq!(status, PrarStatus::Ok, "{}", last_error());
    s
}

#[test]
fn graph_handles() {
    let g = generate("grid:3x3");
    unsafe {
        assert_eq!(prar_graph_node_count(g), 9);
        assert_eq!(prar_graph_edge_count(g), 12);
        assert_eq!(prar_graph_max_degree(g), 4);
        let (mut i, mut j) = (0, 0);
        assert_eq!(prar_graph_edge(g, 0, &mut i, &mut j), PrarStatus::Ok);
        assert_eq!((i, j), (0, 1));
        assert_eq!(prar_graph_edge(g, 12, &mut i, &mut j), PrarStatus::InvalidArgument);
        let bits = [0u8; 12];
        let mut c = 0;
        assert_eq!(prar_graph_count_components(g, bits.as_ptr(), 12, &mut c), PrarStatus::Ok);
        assert_eq!(c, 9);
        assert_eq!(prar_graph_count_components(g, bits.as_ptr(), 11, &mut c), PrarStatus::InvalidArgument);
        prar_graph_free(g);
        assert_eq!(prar_graph_node_count(ptr::null()), 0);
    }
}

#[test]
fn graph_errors_have_codes_and_messages() {
    let mut g = ptr::null_mut();
    unsafe {
        let pairs = [0usize, 0];
        assert_eq!(prar_graph_new(2, pairs.as_ptr(), 1, &mut g), PrarStatus::InvalidGraph);
        assert!(last_error().contains("self-loop"));
        let pairs = [0usize, 1, 1, 0];
        assert_eq!(prar_graph_new(2, pairs.as_ptr(), 2, &mut g), PrarStatus::InvalidGraph);
        assert_eq!(prar_graph_new(2, ptr::null(), 1, &mut g), PrarStatus::NullPointer);
        let spec = cstr("cycle:2");
        assert_eq!(prar_graph_generate(spec.as_ptr(), &mut g), PrarStatus::InvalidGraph);
        let spec = cstr("torus:2");
        assert_eq!(prar_graph_generate(spec.as_ptr(), &mut g), PrarStatus::ParseError);
        let path = cstr("/nonexistent/graph.txt");
        assert_eq!(prar_graph_read(path.as_ptr(), &mut g), PrarStatus::IoError);
        assert!(g.is_null());
        // A success clears the message.
        let pairs = [0usize, 1];
        assert_eq!(prar_graph_new(2, pairs.as_ptr(), 1, &mut g), PrarStatus::Ok);
        assert!(prar_last_error().is_null());
        prar_graph_free(g);
    }
}

#[test]
fn hardcore_bits_are_independent_sets_and_reproducible() {
    let g = generate("cycle:50");
    let a = sampler(g, "hardcore:lambda=0.8", 3);
    let b = sampler(g, "hardcore:lambda=0.8", 3);
    let mut x = [0u8; 50];
    let mut y = [0u8; 50];
    unsafe {
        assert_eq!(prar_sampler_dimension_count(a), 50);
        for _ in 0..100 {
            assert_eq!(prar_sampler_sample_bits(a, ptr::null(), 0, x.as_mut_ptr(), 50), PrarStatus::Ok);
            assert_eq!(prar_sampler_sample_bits(b, ptr::null(), 0, y.as_mut_ptr(), 50), PrarStatus::Ok);
            assert_eq!(x, y);
            assert!((0..50).all(|i| x[i] + x[(i + 1) % 50] < 2));
        }
        let mut stats = PrarStats::default();
        assert_eq!(prar_sampler_last_stats(a, &mut stats), PrarStatus::Ok);
        assert!(stats.attempts >= 1 && stats.bernoulli_draws >= 50);

        let target = [7usize, 3];
        let mut two = [9u8; 2];
        assert_eq!(prar_sampler_sample_bits(a, target.as_ptr(), 2, two.as_mut_ptr(), 2), PrarStatus::Ok);
        assert!(two.iter().all(|&v| v <= 1));
        assert_eq!(prar_sampler_sample_bits(a, ptr::null(), 0, x.as_mut_ptr(), 10), PrarStatus::BufferTooSmall);
        let bad = [50usize];
        assert_eq!(prar_sampler_sample_bits(a, bad.as_ptr(), 1, two.as_mut_ptr(), 2), PrarStatus::InvalidArgument);
        let mut r = [0f64; 50];
        assert_eq!(prar_sampler_sample_reals(a, ptr::null(), 0, r.as_mut_ptr(), 50), PrarStatus::WrongModelKind);
        prar_sampler_free(a);
        prar_sampler_free(b);
        prar_graph_free(g);
    }
}

#[test]
fn reals_and_trees() {
    let g = generate("cycle:4");
    let an = sampler(g, "autonormal:J=1,beta=0.5,y=0.3", 1);
    let wt = sampler(g, "wilson:root=2", 1);
    unsafe {
        let mut r = [0f64; 4];
        assert_eq!(prar_sampler_sample_reals(an, ptr::null(), 0, r.as_mut_ptr(), 4), PrarStatus::Ok);
        assert!(r.iter().all(|x| (0.0..=1.0).contains(x)));
        let mut parent = [0i64; 4];
        assert_eq!(prar_sampler_sample_tree(wt, parent.as_mut_ptr(), 4), PrarStatus::Ok);
        assert_eq!(parent[2], -1);
        for v in [0usize, 1, 3] {
            let mut u = v;
            for _ in 0..4 {
                if u == 2 {
                    break;
                }
                u = parent[u] as usize;
            }
            assert_eq!(u, 2);
        }
        prar_sampler_free(an);
        prar_sampler_free(wt);
        prar_graph_free(g);
    }
}

#[test]
fn sampler_errors() {
    let g = generate("path:3");
    let mut s = ptr::null_mut();
    unsafe {
        let m = cstr("hardcore:lambda=-1");
        assert_eq!(prar_sampler_new(g, m.as_ptr(), ptr::null(), 0, 0, &mut s), PrarStatus::InvalidArgument);
        let m = cstr("rc:p=0.3,q=2");
        let method = cstr("backbone");
        assert_eq!(prar_sampler_new(g, m.as_ptr(), method.as_ptr(), 0, 0, &mut s), PrarStatus::InvalidArgument);
        let m = cstr("hardcore:lambda=50");
        assert_eq!(prar_sampler_new(g, m.as_ptr(), ptr::null(), 0, 5, &mut s), PrarStatus::Ok);
        let mut x = [0u8; 3];
        let mut budget_hits = 0;
        for _ in 0..20 {
            if prar_sampler_sample_bits(s, ptr::null(), 0, x.as_mut_ptr(), 3) == PrarStatus::BudgetExceeded {
                budget_hits += 1;
            }
        }
        assert!(budget_hits > 0);
        assert!(last_error().contains("budget"));
        prar_sampler_free(s);
        prar_graph_free(g);
    }
}

#[test]
fn thresholds() {
    assert!((prar_gamma_hardcore(0.3, 4) - 0.62214).abs() < 1e-4);
    assert!(prar_gamma_hardcore(-1.0, 4).is_nan());
    let mut lc = 0.0;
    unsafe {
        assert_eq!(prar_critical_lambda_hardcore(3, &mut lc), PrarStatus::Ok);
        assert!((lc - 1.13224).abs() < 1e-4);
        assert_eq!(prar_critical_lambda_hardcore(1, &mut lc), PrarStatus::InvalidArgument);
    }
    let v = unsafe { CStr::from_ptr(prar_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}
