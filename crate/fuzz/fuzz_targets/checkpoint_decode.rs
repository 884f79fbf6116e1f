#![no_main]
use libfuzzer_sys::fuzz_target;
use relaxlab::harness::{decode_checkpoint, encode_checkpoint};

fuzz_target!(|data: &[u8]| {
    if let Ok(ck) = decode_checkpoint(data) {
        // anything accepted re-encodes to the same bytes
        assert_eq!(encode_checkpoint(&ck.state, ck.tau), data);
    }
});
