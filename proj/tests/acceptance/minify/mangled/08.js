function t(t,n){let e=n;let r=[];function i(){return e}function u(t){r.push(t);return function n(){r=r.filter(n=>n!==t)}}function c(n){if(typeof n.type!=="string"){throw new TypeError("actions need a string type")}e=t(e,n);r.slice().forEach(t=>t());return n}c({type:"@@init"});return{getState:i,subscribe:u,dispatch:c}}
