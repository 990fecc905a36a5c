function e(e){const t=[];let n=0;while(n<e.length){const a=e[n];if(/\s/.test(a)){n++;continue}if(/[0-9]/.test(a)){let a="";while(n<e.length&&/[0-9.]/.test(e[n])){a+=e[n++]}t.push({kind:"number",value:parseFloat(a)});continue}switch(a){case"+":case"-":case"*":case"/":t.push({kind:"operator",value:a});break;case"(":case")":t.push({kind:"paren",value:a});break;default:throw new SyntaxError("unexpected "+a+" at "+n)}n++}return t}
