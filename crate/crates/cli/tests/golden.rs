mod common;

#[test]
fn ten_invocations_are_listed() {
    assert_eq!(common::invocations().len(), 10);
}

#[test]
fn outputs_match_committed_files_single_thread() {
    assert_eq!(common::golden_mismatches(1), Vec::<String>::new());
}

#[test]
fn outputs_match_committed_files_eight_threads() {
    assert_eq!(common::golden_mismatches(8), Vec::<String>::new());
}
