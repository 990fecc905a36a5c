//@pattern esbuild __commonJS helper
var a=(e,t)=>()=>(t||e((t={exports:{}}).exports,t),t.exports)
//@pattern esbuild __export helper
var b=(e,t)=>{for(var r in t)a(e,r,{get:t[r],enumerable:!0})}
//@pattern esbuild __copyProps helper
var c=(e,t,r,n)=>{if(t&&"object"==typeof t||"function"==typeof t)for(let o of d(t))f.call(e,o)||o===r||a(e,o,{get:()=>t[o],enumerable:!(n=g(t,o))||n.enumerable});return e}
