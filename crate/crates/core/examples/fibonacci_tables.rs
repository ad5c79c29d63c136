use solitrend::fib::{fib_limit_ratios, fib_numbers, golden_ratio, miner_ratios, table1, table2};

fn main() {
    println!("first numbers {:?}", fib_numbers(15));
    for i in [5, 10, 20] {
        let r = fib_limit_ratios(&[1, 2, 3, -1], i);
        println!("i = {i:>2}: {r:.6?}");
    }
    println!("φ = {:.9}, Miner set {:?}\n", golden_ratio(), miner_ratios());
    print!("{}\n{}", table1().to_text(), table2().to_text());
}
