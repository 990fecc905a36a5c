const e={circle:e=>({kind:"circle",area:Math.PI*e*e,perimeter:2*Math.PI*e}),rectangle:(e,r)=>({kind:"rectangle",area:e*r,perimeter:2*(e+r)}),describe(e){const{kind:r,area:a,perimeter:t}=e;return`${r}: area ${a.toFixed(2)}, perimeter ${t.toFixed(2)}`}};function r(e){return e.reduce((e,r)=>null===e||r.area>e.area?r:e,null)}
